"""Exact arithmetic in the orientation-preserving crystallographic groups.

The groups handled here are the semidirect products Z^2 x| Z/k for
k = 2, 3, 4, 6: every element is a pair (t, s) of an integer translation
vector t and a rotation class s.  On top of the raw group arithmetic the
module provides integer-lattice computations in Hermite normal form,
classification of finitely generated subgroups, the dimension invariants
T / rep / cent / teich, closure membership, and the rank function g1 of
the matroid whose ground set consists of n labeled copies of the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

Vec = Tuple[int, int]
Mat = Tuple[Vec, Vec]

SUPPORTED_ORDERS = (2, 3, 4, 6)

# Action of the order-k generator on the translation lattice.
_ACTION = {
    2: ((-1, 0), (0, -1)),
    3: ((0, -1), (1, -1)),
    4: ((0, -1), (1, 0)),
    6: ((0, -1), (1, 1)),
}


class GroupElement(NamedTuple):
    """Element (t, s) with translation part (t1, t2) and rotation class s."""

    t1: int
    t2: int
    s: int

    def is_identity(self) -> bool:
        return self.t1 == 0 and self.t2 == 0 and self.s == 0

    def is_translation(self) -> bool:
        """Nontrivial translation: trivial rotation class, nonzero vector."""
        return self.s == 0 and (self.t1 != 0 or self.t2 != 0)

    def is_rotation(self) -> bool:
        return self.s != 0


IDENTITY = GroupElement(0, 0, 0)
T1 = GroupElement(1, 0, 0)
T2 = GroupElement(0, 1, 0)


def rotation_generator(k: int) -> GroupElement:
    """The standard order-k generator ((0,0), 1)."""
    if k not in SUPPORTED_ORDERS:
        raise ValueError(f"k must be one of {SUPPORTED_ORDERS}, got {k}")
    return GroupElement(0, 0, 1)


def _mat_mul(a: Mat, b: Mat) -> Mat:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_vec(m: Mat, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


_IDENTITY_MAT: Mat = ((1, 0), (0, 1))


class GroupContext:
    """Fixed group order k together with precomputed action-matrix powers."""

    __slots__ = ("k", "action_matrix", "powers")

    def __init__(self, k: int):
        if k not in SUPPORTED_ORDERS:
            raise ValueError(f"k must be one of {SUPPORTED_ORDERS}, got {k}")
        self.k = k
        self.action_matrix: Mat = _ACTION[k]
        powers = [_IDENTITY_MAT]
        for _ in range(k - 1):
            powers.append(_mat_mul(powers[-1], self.action_matrix))
        if _mat_mul(powers[-1], self.action_matrix) != _IDENTITY_MAT:
            raise AssertionError("action matrix does not have order k")
        self.powers: Tuple[Mat, ...] = tuple(powers)

    def __repr__(self) -> str:
        return f"GroupContext(k={self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupContext) and other.k == self.k

    def __hash__(self) -> int:
        return hash(("GroupContext", self.k))

    @property
    def full_translation_rep(self) -> int:
        """rep of the full translation lattice Z^2: 4 for k=2, else 2."""
        return 4 if self.k == 2 else 2

    @property
    def rep_param_count(self) -> int:
        """Number of free translation parameters in a pinned representation."""
        return 2 if self.k == 2 else 1

    def compose(self, a: GroupElement, b: GroupElement) -> GroupElement:
        m = self.powers[a[2] % self.k]
        return GroupElement(
            a[0] + m[0][0] * b[0] + m[0][1] * b[1],
            a[1] + m[1][0] * b[0] + m[1][1] * b[1],
            (a[2] + b[2]) % self.k,
        )

    def invert(self, a: GroupElement) -> GroupElement:
        s = (-a[2]) % self.k
        m = self.powers[s]
        return GroupElement(
            -(m[0][0] * a[0] + m[0][1] * a[1]),
            -(m[1][0] * a[0] + m[1][1] * a[1]),
            s,
        )

    def conjugate(self, g: GroupElement, x: GroupElement) -> GroupElement:
        """g * x * g^-1."""
        return self.compose(self.compose(g, x), self.invert(g))

    def power(self, a: GroupElement, e: int) -> GroupElement:
        result = IDENTITY
        base = a
        if e < 0:
            base = self.invert(a)
            e = -e
        for _ in range(e):
            result = self.compose(result, base)
        return result

    def rotation_center(self, a: GroupElement) -> Tuple[Fraction, Fraction]:
        """Unique fixed point of a rotation, in lattice coordinates.

        Solves c = t + M^s c; the matrix I - M^s is invertible exactly
        when s != 0.
        """
        s = a[2] % self.k
        if s == 0:
            raise ValueError("not a rotation")
        m = self.powers[s]
        p, q = 1 - m[0][0], -m[0][1]
        r, t = -m[1][0], 1 - m[1][1]
        det = p * t - q * r
        return (
            Fraction(t * a[0] - q * a[1], det),
            Fraction(-r * a[0] + p * a[1], det),
        )

    def same_center(self, a: GroupElement, b: GroupElement) -> bool:
        """Whether two rotations fix the same point (integer-only test).

        Two rotations of the group share a fixed point exactly when they
        commute, so no rational arithmetic is needed.
        """
        ab = self.compose(a, b)
        ba = self.compose(b, a)
        return ab == ba


def element_to_str(a: GroupElement) -> str:
    return f"{a.t1} {a.t2} {a.s}"


def element_from_str(text: str, k: int) -> GroupElement:
    parts = text.split()
    if len(parts) != 3:
        raise ValueError(f"expected 'm1 m2 s', got {text!r}")
    t1, t2, s = (int(p) for p in parts)
    if not 0 <= s < k:
        raise ValueError(f"rotation class {s} out of range [0, {k})")
    return GroupElement(t1, t2, s)


def lattice_to_str(lat: "Lattice") -> str:
    """HNF basis rows, one vector per row; empty string for the trivial lattice."""
    return "\n".join(f"{x} {y}" for x, y in lat.basis)


# ---------------------------------------------------------------------------
# Integer lattices in canonical Hermite normal form.
# ---------------------------------------------------------------------------


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with g = a*x + b*y and g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^2 with canonical column-style HNF basis.

    The basis is () for the trivial lattice, a single vector with positive
    leading coordinate for rank 1, and ((a, b), (0, c)) with a > 0, c > 0,
    0 <= b < c for rank 2.  Equal lattices compare structurally equal.
    """

    basis: Tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v: Vec) -> bool:
        return lattice_member(self, v)


EMPTY_LATTICE = Lattice(())
FULL_LATTICE = Lattice(((1, 0), (0, 1)))


def lattice_from_generators(vectors: Iterable[Vec]) -> Lattice:
    """Canonical HNF basis of the sublattice generated by the vectors."""
    vs = [(int(v[0]), int(v[1])) for v in vectors if v[0] != 0 or v[1] != 0]
    if not vs:
        return EMPTY_LATTICE
    det = 0
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            det = gcd(det, vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0])
            if det == 1:
                break
        if det == 1:
            break
    if det == 0:
        # All generators collinear: multiples of one primitive direction.
        x0, y0 = vs[0]
        g0 = gcd(abs(x0), abs(y0))
        dx, dy = x0 // g0, y0 // g0
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        mult = 0
        for x, y in vs:
            mult = gcd(mult, abs(x // dx) if dx else abs(y // dy))
        return Lattice(((mult * dx, mult * dy),))
    a = 0
    for x, _ in vs:
        a = gcd(a, abs(x))
    c = det // a
    # Build an actual lattice element with first coordinate a.
    cur = vs[0]
    for v in vs[1:]:
        g, alpha, beta = _xgcd(cur[0], v[0])
        cur = (g, alpha * cur[1] + beta * v[1])
    b = cur[1] % c
    return Lattice(((a, b), (0, c)))


def lattice_join(a: Lattice, b: Lattice) -> Lattice:
    return lattice_from_generators(a.basis + b.basis)


def lattice_member(lat: Lattice, v: Vec) -> bool:
    x, y = v
    if lat.rank == 0:
        return x == 0 and y == 0
    if lat.rank == 1:
        bx, by = lat.basis[0]
        if bx * y - by * x != 0:
            return False
        return (x % bx == 0) if bx else (y % by == 0)
    (a, b), (_, c) = lat.basis
    if x % a != 0:
        return False
    return (y - (x // a) * b) % c == 0


def lattice_in_qspan(lat: Lattice, v: Vec) -> bool:
    """Whether v lies in the rational span of the lattice."""
    if lat.rank == 0:
        return v[0] == 0 and v[1] == 0
    if lat.rank == 1:
        bx, by = lat.basis[0]
        return bx * v[1] - by * v[0] == 0
    return True


def saturate(lat: Lattice) -> Lattice:
    """Largest sublattice of Z^2 with the same rational span."""
    if lat.rank == 0:
        return lat
    if lat.rank == 2:
        return FULL_LATTICE
    x, y = lat.basis[0]
    g = gcd(abs(x), abs(y))
    return Lattice(((x // g, y // g),))


# ---------------------------------------------------------------------------
# Subgroup classification and dimension invariants.
# ---------------------------------------------------------------------------

TRIVIAL = "trivial"
CYCLIC_ROTATION = "cyclic-rotation"
TRANSLATION_ONLY = "translation-only"
MIXED = "mixed"


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Classified finitely generated subgroup.

    ``lattice`` is the exact translation subgroup for k = 2 and for groups
    generated by translations only; for mixed subgroups with k = 3, 4, 6 it
    is None and only ``lattice_nontrivial`` is meaningful (which is all the
    rank formulas need).
    """

    context: GroupContext
    generators: Tuple[GroupElement, ...]
    kind: str
    lattice: Optional[Lattice]
    lattice_nontrivial: bool
    rotation_witness: Optional[GroupElement]
    common_center: Optional[Tuple[Fraction, Fraction]]

    @property
    def has_rotation(self) -> bool:
        return self.kind in (CYCLIC_ROTATION, MIXED)


def classify_subgroup(
    ctx: GroupContext, generators: Sequence[GroupElement]
) -> SubgroupDescriptor:
    """Classify the subgroup generated by the given elements.

    For k = 2 the translation subgroup is computed exactly (translation
    subgroups are normal there); for k = 3, 4, 6 only its nontriviality is
    tracked unless the subgroup consists of translations alone.
    """
    gens = tuple(GroupElement(*g) for g in generators)
    translations = [g for g in gens if g.is_translation()]
    rotations = [g for g in gens if g.is_rotation()]

    if not translations and not rotations:
        return SubgroupDescriptor(ctx, gens, TRIVIAL, EMPTY_LATTICE, False, None, None)

    if not rotations:
        lat = lattice_from_generators([(g.t1, g.t2) for g in translations])
        return SubgroupDescriptor(ctx, gens, TRANSLATION_ONLY, lat, True, None, None)

    rho0 = rotations[0]
    cyclic = not translations and all(
        ctx.same_center(rho0, r) for r in rotations[1:]
    )
    if cyclic:
        return SubgroupDescriptor(
            ctx, gens, CYCLIC_ROTATION, EMPTY_LATTICE, False,
            rho0, ctx.rotation_center(rho0),
        )

    if ctx.k == 2:
        vectors = [(g.t1, g.t2) for g in translations]
        vectors += [(rho0.t1 - r.t1, rho0.t2 - r.t2) for r in rotations[1:]]
        lat = lattice_from_generators(vectors)
        return SubgroupDescriptor(ctx, gens, MIXED, lat, lat.rank > 0, rho0, None)
    return SubgroupDescriptor(ctx, gens, MIXED, None, True, rho0, None)


def invariant_t(d: SubgroupDescriptor) -> int:
    """Dimension of translations commuting with the subgroup: 0 or 2."""
    return 0 if d.has_rotation else 2


def rep_of_lattice(ctx: GroupContext, lat) -> int:
    """rep of a translation subgroup given as a Lattice or a nontrivial flag.

    For k = 2 the value is twice the rank, so the exact lattice is
    required; for k = 3, 4, 6 any nontrivial translation subgroup has
    rep = 2 and a bare flag suffices.
    """
    if isinstance(lat, Lattice):
        if ctx.k == 2:
            return 2 * lat.rank
        return 2 if lat.rank > 0 else 0
    if ctx.k == 2:
        raise ValueError("k=2 requires an exact lattice, not a flag")
    return 2 if lat else 0


def rep_dim(d: SubgroupDescriptor) -> int:
    """rep of the translation subgroup of a classified subgroup."""
    if d.lattice is not None:
        return rep_of_lattice(d.context, d.lattice)
    return rep_of_lattice(d.context, d.lattice_nontrivial)


def cent_of(d: SubgroupDescriptor) -> int:
    """Dimension of the centralizer of the represented subgroup."""
    return {MIXED: 0, CYCLIC_ROTATION: 1, TRANSLATION_ONLY: 2, TRIVIAL: 3}[d.kind]


def teich_of_lattice(ctx: GroupContext, lat) -> int:
    """Dimension of the restricted Teichmueller space of a translation subgroup."""
    rep = rep_of_lattice(ctx, lat)
    return rep - 1 if rep > 0 else 0


def in_closure(ctx: GroupContext, gamma: GroupElement, d: SubgroupDescriptor) -> bool:
    """Membership of gamma in the closure of the classified subgroup.

    The closure is the largest supergroup with the same rep and T
    invariants; the case analysis differs between k = 2 and k = 3, 4, 6.
    """
    gamma = GroupElement(*gamma)
    if d.kind == TRIVIAL:
        return gamma.is_identity()
    if ctx.k != 2:
        if d.kind == CYCLIC_ROTATION:
            return gamma.is_identity() or (
                gamma.is_rotation() and ctx.same_center(gamma, d.rotation_witness)
            )
        if d.kind == TRANSLATION_ONLY:
            return gamma.s == 0
        return True  # mixed: closure is the whole group
    if d.kind == CYCLIC_ROTATION:
        return gamma.is_identity() or gamma == d.rotation_witness
    sat = saturate(d.lattice)
    if d.kind == TRANSLATION_ONLY:
        return gamma.s == 0 and lattice_in_qspan(d.lattice, (gamma.t1, gamma.t2))
    # mixed, k = 2
    if gamma.s == 0:
        return lattice_member(sat, (gamma.t1, gamma.t2))
    w = d.rotation_witness
    return lattice_member(sat, (gamma.t1 - w.t1, gamma.t2 - w.t2))


# ---------------------------------------------------------------------------
# The matroid on n labeled copies of the group.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexedSubset:
    """Finite multiset of (element, part) pairs with parts 1..n.

    Repeated identical pairs are genuine parallel copies: they contribute
    to the size but never to the rank, so any repeat makes the set
    dependent.
    """

    n: int
    elements: Tuple[Tuple[GroupElement, int], ...]

    def __post_init__(self):
        for _, i in self.elements:
            if not 1 <= i <= self.n:
                raise ValueError(f"part index {i} out of range 1..{self.n}")

    def part(self, i: int) -> Tuple[GroupElement, ...]:
        return tuple(g for g, j in self.elements if j == i)

    def parts(self) -> Tuple[Tuple[GroupElement, ...], ...]:
        return tuple(self.part(i) for i in range(1, self.n + 1))

    def nonempty_parts(self) -> Tuple[int, ...]:
        return tuple(sorted({i for _, i in self.elements}))

    @property
    def size(self) -> int:
        return len(self.elements)

    def c(self) -> int:
        return len(self.nonempty_parts())

    def add(self, gamma: GroupElement, i: int) -> "IndexedSubset":
        return IndexedSubset(self.n, self.elements + ((GroupElement(*gamma), i),))


def g1_rank(ctx: GroupContext, a: IndexedSubset) -> int:
    """Matroid rank n + rep(Lambda(A))/2 - sum_i T(Gamma_{A,i})/2."""
    t_sum = 0
    if ctx.k == 2:
        lat = EMPTY_LATTICE
        for part in a.parts():
            if not part:
                t_sum += 2
                continue
            d = classify_subgroup(ctx, part)
            t_sum += invariant_t(d)
            lat = lattice_join(lat, d.lattice)
        rep = rep_of_lattice(ctx, lat)
    else:
        nontrivial = False
        for part in a.parts():
            if not part:
                t_sum += 2
                continue
            d = classify_subgroup(ctx, part)
            t_sum += invariant_t(d)
            nontrivial = nontrivial or d.lattice_nontrivial
        rep = rep_of_lattice(ctx, nontrivial)
    return a.n + rep // 2 - t_sum // 2


def is_independent(ctx: GroupContext, a: IndexedSubset) -> bool:
    return a.size == g1_rank(ctx, a)


def is_tight(ctx: GroupContext, a: IndexedSubset) -> bool:
    return is_independent(ctx, a) and a.size == a.c() + ctx.full_translation_rep // 2


def is_spanning(ctx: GroupContext, a: IndexedSubset) -> bool:
    """Whether A contains a tight subset on all of its nonempty parts.

    Equivalent to g1(A) reaching the maximum c(A) + rep(Lambda(Gamma_k))/2
    over sets supported on the same parts: in that case every nonempty
    part has a rotation and a tight subset can be grown greedily from one
    rotation per part.
    """
    return g1_rank(ctx, a) == a.c() + ctx.full_translation_rep // 2


def conjugate_subset(
    ctx: GroupContext, a: IndexedSubset, gammas: Sequence[GroupElement]
) -> IndexedSubset:
    """Conjugate part i by gammas[i]: each element becomes g^-1 x g."""
    parts = a.nonempty_parts()
    if len(gammas) != len(parts):
        raise ValueError("invalid transform: need one conjugator per nonempty part")
    by_part = dict(zip(parts, gammas))
    new_elements = []
    for x, i in a.elements:
        g = by_part[i]
        new_elements.append((ctx.compose(ctx.compose(ctx.invert(g), x), g), i))
    return IndexedSubset(a.n, tuple(new_elements))


def separate_subset(
    a: IndexedSubset, i: int, j: int, moved: Sequence[GroupElement]
) -> IndexedSubset:
    """Move a chosen sub-multiset of part i to the empty part j."""
    if not 1 <= j <= a.n or a.part(j):
        raise ValueError("invalid transform: target part must exist and be empty")
    remaining = list(moved)
    new_elements = []
    for x, p in a.elements:
        if p == i and x in remaining:
            remaining.remove(x)
            new_elements.append((x, j))
        else:
            new_elements.append((x, p))
    if remaining:
        raise ValueError("invalid transform: moved elements not contained in part i")
    return IndexedSubset(a.n, tuple(new_elements))


def fuse_subset(a: IndexedSubset, i: int, j: int) -> IndexedSubset:
    """Merge part j into part i; both must be nonempty."""
    if not (a.part(i) and a.part(j)) or i == j:
        raise ValueError("invalid transform: fuse needs two distinct nonempty parts")
    return IndexedSubset(
        a.n, tuple((x, i if p == j else p) for x, p in a.elements)
    )
