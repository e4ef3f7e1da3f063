"""Command-line interface: exit codes, certificates, formats, rendering."""

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from crystal_rigidity.cli import main
from crystal_rigidity.colored_graph import parse_graph
from crystal_rigidity.sparsity import is_g11_independent, is_laman_sparse

LAMAN = "gamma 3\nvertices 1\ne 0 0 0 0 1\ne 0 0 1 0 0\ne 0 0 1 0 1\n"
BAD = "gamma 3\nvertices 1\ne 0 0 1 0 0\ne 0 0 0 1 0\ne 0 0 0 0 1\n"
G22 = "gamma 3\nvertices 1\ne 0 0 0 0 1\ne 0 0 1 0 0\ne 0 0 1 0 1\ne 0 0 0 1 0\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("laman", LAMAN), ("bad", BAD), ("g22", G22)]:
        p = tmp_path / f"{name}.graph"
        p.write_text(text)
        paths[name] = str(p)
    return paths


class TestCheck:
    def test_laman_positive(self, files, capsys):
        assert main(["check", files["laman"], "--family", "laman"]) == 0
        assert "LAMAN" in capsys.readouterr().out

    def test_laman_negative_prints_circuit(self, files, capsys):
        assert main(["check", files["bad"], "--family", "laman"]) == 1
        out = capsys.readouterr().out
        assert "NOT-LAMAN" in out
        circuit_line = next(l for l in out.splitlines() if l.startswith("circuit"))
        circuit = [int(x) for x in circuit_line.split()[1:]]
        g = parse_graph(BAD)
        # the printed certificate re-validates
        assert not is_laman_sparse(g, circuit)
        for e in circuit:
            rest = [x for x in circuit if x != e]
            if rest:
                assert is_laman_sparse(g, rest)

    def test_gamma22_partition_revalidates(self, files, capsys):
        assert main(["check", files["g22"], "--family", "22"]) == 0
        out = capsys.readouterr().out
        g = parse_graph(G22)
        for line in out.splitlines():
            if line.startswith("part-"):
                part = [int(x) for x in line.split()[1:]]
                assert is_g11_independent(g, part)

    def test_gamma22_negative(self, files, capsys):
        assert main(["check", files["bad"], "--family", "22"]) == 1
        assert "NOT-GAMMA-22" in capsys.readouterr().out

    def test_family_11_and_gencone(self, files, capsys, tmp_path):
        g11 = tmp_path / "g11.graph"
        g11.write_text("gamma 3\nvertices 1\ne 0 0 0 0 1\ne 0 0 1 0 0\n")
        assert main(["check", str(g11), "--family", "11"]) == 0
        out = capsys.readouterr().out
        assert "GAMMA-11" in out and "cone-core" in out
        cone = tmp_path / "cone.graph"
        cone.write_text("gamma 3\nvertices 1\ne 0 0 0 0 1\n")
        assert main(["check", str(cone), "--family", "gencone11"]) == 0
        assert "rank 1" in capsys.readouterr().out

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["check", "/nonexistent.graph"]) == 2

    def test_parse_error_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.graph"
        p.write_text("gamma 5\nvertices 1\n")
        assert main(["check", str(p)]) == 2
        assert "k must be 2,3,4,6" in capsys.readouterr().err

    def test_json_payload(self, files, capsys):
        assert main(["check", files["g22"], "--family", "22", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["decision"] is True
        assert sorted(payload["partition"][0] + payload["partition"][1]) == [0, 1, 2, 3]


class TestRealizeRank:
    def test_realize_success(self, files, capsys):
        assert main(["realize", files["laman"], "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("point 0 ")
        assert "lattice v1" in out

    def test_realize_collapse(self, files, capsys):
        assert main(["realize", files["g22"], "--seed", "7"]) == 1
        assert "collapsed (kernel dim 0)" in capsys.readouterr().out

    def test_realize_circuit_diagnosis(self, files, capsys):
        assert main(["realize", files["bad"], "--seed", "7"]) == 1
        out = capsys.readouterr().out
        assert "diagnosis" in out and "circuit" in out

    def test_rank_verdicts(self, files, capsys):
        assert main(["rank", files["laman"], "--seed", "5"]) == 0
        assert "MINIMALLY-RIGID" in capsys.readouterr().out
        assert main(["rank", files["bad"], "--seed", "5"]) == 1
        assert "FLEXIBLE" in capsys.readouterr().out

    def test_rank_flexible_translation_loops(self, tmp_path, capsys):
        p = tmp_path / "trans.graph"
        p.write_text("gamma 3\nvertices 1\ne 0 0 1 0 0\ne 0 0 0 1 0\ne 0 0 1 1 0\n")
        assert main(["rank", str(p), "--seed", "5"]) == 1
        assert "FLEXIBLE" in capsys.readouterr().out

    def test_rank_overbraced(self, tmp_path, capsys):
        over = tmp_path / "over.graph"
        over.write_text(LAMAN + "e 0 0 0 1 0\ne 0 0 0 1 1\n")
        assert main(["rank", str(over), "--seed", "5"]) == 1
        assert "OVERBRACED" in capsys.readouterr().out

    def test_rank_json(self, files, capsys):
        assert main(["rank", files["laman"], "--seed", "5", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "MINIMALLY-RIGID"
        assert payload["rank"] == payload["m"] == payload["target"] == 3


class TestRender:
    def test_svg_well_formed_and_counts(self, files, tmp_path, capsys):
        out = tmp_path / "patch.svg"
        assert main(["render", files["laman"], "--out", str(out), "--seed", "3", "--radius", "2"]) == 0
        doc = out.read_text()
        root = ET.fromstring(doc)
        assert root.tag.endswith("svg")
        circles = [el for el in root.iter() if el.tag.endswith("circle")]
        assert len(circles) >= 3 * (2 * 2 + 1) ** 2

    def test_radius_zero_point_count(self, files, tmp_path, capsys):
        out = tmp_path / "p0.svg"
        assert main(["render", files["laman"], "--out", str(out), "--seed", "3", "--radius", "0"]) == 0
        root = ET.fromstring(out.read_text())
        circles = [el for el in root.iter() if el.tag.endswith("circle")]
        assert len(circles) == 1 * 3

    def test_deterministic_output(self, files, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        main(["render", files["laman"], "--out", str(a), "--seed", "9"])
        main(["render", files["laman"], "--out", str(b), "--seed", "9"])
        assert a.read_bytes() == b.read_bytes()

    def test_collapsed_only_graph_fails(self, files, tmp_path, capsys):
        out = tmp_path / "c.svg"
        assert main(["render", files["g22"], "--out", str(out), "--seed", "3"]) == 1
        assert "collapsed" in capsys.readouterr().out

    def test_non_laman_fallback_renders(self, tmp_path, capsys):
        under = tmp_path / "under.graph"
        under.write_text("gamma 3\nvertices 1\ne 0 0 0 0 1\n")
        out = tmp_path / "u.svg"
        assert main(["render", str(under), "--out", str(out), "--seed", "3"]) == 0
        ET.fromstring(out.read_text())


class TestGenSelftest:
    def test_gen_deterministic(self, capsys):
        assert main(["gen", "3", "2", "5", "--seed", "12"]) == 0
        first = capsys.readouterr().out
        assert main(["gen", "3", "2", "5", "--seed", "12"]) == 0
        assert capsys.readouterr().out == first
        g = parse_graph(first)
        assert g.n == 2 and g.m == 5

    def test_gen_bad_k_exit_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["gen", "5", "2", "5"])
        assert err.value.code == 2

    def test_gen_writes_file(self, tmp_path):
        out = tmp_path / "g.graph"
        assert main(["gen", "4", "3", "6", "--seed", "1", "--out", str(out)]) == 0
        parse_graph(out.read_text())

    def test_cr_seed_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("CR_SEED", "12")
        assert main(["gen", "3", "2", "5"]) == 0
        via_env = capsys.readouterr().out
        assert main(["gen", "3", "2", "5", "--seed", "12"]) == 0
        assert capsys.readouterr().out == via_env

    def test_selftest_small(self, capsys):
        assert main(["selftest", "--scale", "0.05", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_entry_point_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "crystal_rigidity.cli", "gen", "2", "1", "2", "--seed", "0"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("gamma 2")
