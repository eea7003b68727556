"""Subspace arrangements and their many-body compactifications.

Subspaces of Q^n are stored by the canonical integer row echelon basis
from the kernel, so equal subspaces are equal values.  The compactified
space has one hypersurface per nonzero subspace, ordered by inclusion,
with the zero subspace as the interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from . import kernel
from .corners import CornersSpace
from .labels import PairLabel
from .products import maximal_chains, product_space


def _integer_row(row) -> list[int]:
    fr = [Fraction(x) for x in row]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * den) for x in fr]


class Subspace:
    __slots__ = ("n", "rows", "pivots")

    def __init__(self, n: int, rows=()):
        rows = [_integer_row(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise ValueError(f"row of length {len(r)} in ambient dimension {n}")
        self.n = n
        self.rows, self.pivots = kernel.rref(rows, n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def annihilator(self) -> tuple:
        return kernel.nullspace(self.rows, self.n)

    def __and__(self, other: "Subspace") -> "Subspace":
        eqs = list(self.annihilator()) + list(other.annihilator())
        return Subspace(self.n, kernel.nullspace(eqs, self.n))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.n, list(self.rows) + list(other.rows))

    def __le__(self, other: "Subspace") -> bool:
        return kernel.rank(list(self.rows) + list(other.rows), self.n) == other.dim

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def key(self):
        return (self.dim, self.rows)

    def label(self) -> str:
        return "[" + ";".join(",".join(str(x) for x in r) for r in self.rows) + "]"

    def __repr__(self) -> str:
        return f"Subspace({self.n}, {self.label()})"


@dataclass(frozen=True)
class SubspaceArrangement:
    ambient_dim: int
    subspaces: tuple  # sorted by (dim, rows)

    def zero(self) -> Subspace:
        return Subspace(self.ambient_dim)

    def full(self) -> Subspace:
        return Subspace.full(self.ambient_dim)

    def by_label(self) -> dict:
        return {s.label(): s for s in self.subspaces}


def close_arrangement(ambient_dim: int, raw) -> SubspaceArrangement:
    """Smallest intersection-closed family holding ``raw``, 0 and the whole space."""
    if ambient_dim < 0:
        raise ValueError("negative dimension")
    items = {Subspace(ambient_dim), Subspace.full(ambient_dim)}
    for m in raw:
        items.add(m if isinstance(m, Subspace) else Subspace(ambient_dim, m))
    if any(s.n != ambient_dim for s in items):
        raise ValueError("subspace in the wrong ambient dimension")
    grew = True
    while grew:
        grew = False
        for a, b in combinations(list(items), 2):
            c = a & b
            if c not in items:
                items.add(c)
                grew = True
    return SubspaceArrangement(ambient_dim, tuple(sorted(items, key=Subspace.key)))


def quotient_arrangement(A: SubspaceArrangement, S: Subspace) -> SubspaceArrangement:
    """Images in V/S, written in the coordinates that are not pivots of S."""
    if S not in A.subspaces:
        raise ValueError("subspace is not in the arrangement")
    keep = [c for c in range(A.ambient_dim) if c not in set(S.pivots)]

    def reduce(row):
        v = [Fraction(x) for x in row]
        for r, p in zip(S.rows, S.pivots):
            if v[p]:
                f = v[p] / r[p]
                v = [a - f * b for a, b in zip(v, r)]
        return [v[c] for c in keep]

    images = [[reduce(r) for r in T.rows] for T in A.subspaces]
    return close_arrangement(len(keep), images)


@dataclass(frozen=True)
class ManyBody:
    space: CornersSpace
    subspace: dict  # label -> Subspace
    fibers: dict  # label -> quotient arrangement (fiber)
    base_index: dict  # label -> labels of smaller nonzero subspaces


def mb_space(A: SubspaceArrangement) -> ManyBody:
    zero = A.zero()
    nonzero = [s for s in A.subspaces if s != zero]
    order = [(a.label(), b.label()) for a in A.subspaces for b in A.subspaces if a < b]
    chains = maximal_chains(nonzero, lambda a, b: a < b)
    facets = [[s.label() for s in c] for c in chains]
    space = CornersSpace(zero.label(), [s.label() for s in nonzero], order, facets)
    fibers = {s.label(): quotient_arrangement(A, s) for s in nonzero}
    base = {s.label(): tuple(t.label() for t in nonzero if t < s) for s in nonzero}
    return ManyBody(space, {s.label(): s for s in A.subspaces}, fibers, base)


def direct_sum(S: Subspace, T: Subspace) -> Subspace:
    rows = [list(r) + [0] * T.n for r in S.rows] + [[0] * S.n + list(r) for r in T.rows]
    return Subspace(S.n + T.n, rows)


def product_arrangement(AV: SubspaceArrangement, AW: SubspaceArrangement) -> SubspaceArrangement:
    sums = [direct_sum(s, t) for s in AV.subspaces for t in AW.subspaces]
    return close_arrangement(AV.ambient_dim + AW.ambient_dim, sums)


@dataclass(frozen=True)
class MBProductCheck:
    iso: bool
    witness: dict  # label of S+T in the product arrangement -> pair label
    problems: tuple


def mb_product_check(AV: SubspaceArrangement, AW: SubspaceArrangement) -> MBProductCheck:
    """Compare mb(V x W) with the ordered product mb(V) x mb(W)."""
    joint = mb_space(product_arrangement(AV, AW)).space
    P = product_space(mb_space(AV).space, mb_space(AW).space)
    witness = {
        direct_sum(s, t).label(): PairLabel(s.label(), t.label())
        for s in AV.subspaces
        for t in AW.subspaces
    }
    problems = []
    if len(set(witness.values())) != len(witness):
        problems.append("pair labels collide")
    if set(witness) != set(joint.mtot()):
        problems.append("product arrangement is not the set of direct sums")
    if sorted(map(str, (witness[x] for x in joint.hypersurfaces if x in witness))) != sorted(map(str, P.hypersurfaces)):
        problems.append("hypersurfaces differ")
    if witness.get(joint.interior) != P.interior:
        problems.append("interiors differ")
    if not problems:
        moved = frozenset((witness[a], witness[b]) for a, b in joint.less)
        if moved != P.less:
            problems.append("orders differ")
        if {frozenset(witness[x] for x in f) for f in joint.facets} != set(P.facets):
            problems.append("corners differ")
    return MBProductCheck(not problems, witness, tuple(problems))
