"""Free monoids on labeled generators, unimodular cones and fans.

A boundary face with hypersurfaces ``H1..Hk`` carries the free monoid on
generators ``h1..hk``.  Blow-ups refine that monoid into unimodular
simplicial cones; this module holds the exact arithmetic for those
refinements and the sign and kernel predicates evaluated on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from . import kernel
from .fourier_motzkin import has_nonzero_nonnegative_solution
from .labels import label_key, label_str, sort_labels


class MonoidVector:
    """Sparse integer vector indexed by labels.

    Generators have nonnegative entries; functionals may be signed.
    Immutable and hashable.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, coords: Mapping | Iterable = ()):
        if isinstance(coords, Mapping):
            pairs = coords.items()
        else:
            pairs = coords
        acc: dict = {}
        for lab, c in pairs:
            if not isinstance(c, int):
                raise TypeError(f"coordinate {c!r} is not an integer")
            acc[lab] = acc.get(lab, 0) + c
        self._items = tuple(sorted(((k, v) for k, v in acc.items() if v), key=lambda kv: label_key(kv[0])))
        self._hash = hash(self._items)

    @classmethod
    def unit(cls, label) -> "MonoidVector":
        return cls({label: 1})

    @classmethod
    def sum_of(cls, labels) -> "MonoidVector":
        return cls([(lab, 1) for lab in labels])

    def items(self):
        return self._items

    def as_dict(self) -> dict:
        return dict(self._items)

    def __getitem__(self, label) -> int:
        for k, v in self._items:
            if k == label:
                return v
        return 0

    def support(self) -> frozenset:
        return frozenset(k for k, _ in self._items)

    def coords(self, ambient) -> tuple[int, ...]:
        d = dict(self._items)
        return tuple(d.get(lab, 0) for lab in ambient)

    def is_zero(self) -> bool:
        return not self._items

    def is_nonnegative(self) -> bool:
        return all(v > 0 for _, v in self._items)

    def dot(self, other: "MonoidVector") -> int:
        d = dict(other._items)
        return sum(v * d.get(k, 0) for k, v in self._items)

    def restrict(self, labels) -> "MonoidVector":
        keep = set(labels)
        return MonoidVector([(k, v) for k, v in self._items if k in keep])

    def relabel(self, mapping) -> "MonoidVector":
        return MonoidVector([(mapping[k], v) for k, v in self._items])

    def __add__(self, other: "MonoidVector") -> "MonoidVector":
        return MonoidVector(list(self._items) + list(other._items))

    def __sub__(self, other: "MonoidVector") -> "MonoidVector":
        return MonoidVector(list(self._items) + [(k, -v) for k, v in other._items])

    def __neg__(self) -> "MonoidVector":
        return MonoidVector([(k, -v) for k, v in self._items])

    def __mul__(self, n: int) -> "MonoidVector":
        return MonoidVector([(k, n * v) for k, v in self._items])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, MonoidVector) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self):
        return tuple((label_key(k), v) for k, v in self._items)

    def __repr__(self) -> str:
        return f"MonoidVector({vector_name(self)})"


def vector_name(v: MonoidVector) -> str:
    """Readable name such as ``1+2`` or ``2*H-G``; the zero vector is ``0``."""
    if v.is_zero():
        return "0"
    parts = []
    for lab, c in v.items():
        name = label_str(lab)
        if c == 1:
            term = name
        elif c == -1:
            term = "-" + name
        else:
            term = f"{c}*{name}"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts)


def _dense_key(ambient):
    return lambda v: v.coords(ambient)


class Cone:
    """Simplicial cone on linearly independent nonnegative generators.

    Generators are stored sorted by their coordinate vector so that equal
    cones compare and hash equal.  A full-dimensional cone must be
    unimodular.
    """

    __slots__ = ("ambient", "generators", "_hash")

    def __init__(self, ambient, generators: Iterable[MonoidVector]):
        self.ambient = sort_labels(ambient)
        amb = set(self.ambient)
        gens = list(generators)
        for g in gens:
            if g.is_zero() or not g.is_nonnegative():
                raise ValueError(f"generator {vector_name(g)} is not a nonzero nonnegative vector")
            if not g.support() <= amb:
                raise ValueError(f"generator {vector_name(g)} leaves the ambient labels")
        self.generators = tuple(sorted(set(gens), key=_dense_key(self.ambient)))
        if len(self.generators) != len(gens):
            raise ValueError("repeated generator")
        mat = [g.coords(self.ambient) for g in self.generators]
        if kernel.rank(mat, len(self.ambient)) != len(mat):
            raise ValueError("generators are linearly dependent")
        if len(mat) == len(self.ambient) and abs(kernel.det(mat)) != 1:
            raise ValueError("full-dimensional cone is not unimodular")
        self._hash = hash((self.ambient, self.generators))

    @classmethod
    def orthant(cls, ambient) -> "Cone":
        return cls(ambient, [MonoidVector.unit(lab) for lab in ambient])

    @property
    def dim(self) -> int:
        return len(self.generators)

    def is_full(self) -> bool:
        return self.dim == len(self.ambient)

    def matrix(self) -> list[tuple[int, ...]]:
        return [g.coords(self.ambient) for g in self.generators]

    def det(self) -> int:
        return kernel.det(self.matrix())

    def support(self) -> frozenset:
        out: set = set()
        for g in self.generators:
            out |= g.support()
        return frozenset(out)

    def face(self, gens: Iterable[MonoidVector]) -> "Cone":
        gens = list(gens)
        if not set(gens) <= set(self.generators):
            raise ValueError("not a face: generators are not a subset")
        return Cone(self.ambient, gens)

    def faces(self):
        gens = self.generators
        for r in range(len(gens) + 1):
            for sub in combinations(gens, r):
                yield Cone(self.ambient, sub)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.ambient == other.ambient and self.generators == other.generators

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "<" + ", ".join(vector_name(g) for g in self.generators) + ">"


class Fan:
    """A refinement of the orthant on ``ambient`` into unimodular cones."""

    __slots__ = ("ambient", "cones", "_hash")

    def __init__(self, ambient, cones: Iterable[Cone]):
        self.ambient = sort_labels(ambient)
        self.cones = frozenset(cones)
        for c in self.cones:
            if c.ambient != self.ambient:
                raise ValueError("cone ambient differs from fan ambient")
            if not c.is_full():
                raise ValueError(f"max cone {c!r} is not full-dimensional")
        if not self.cones:
            raise ValueError("a fan needs at least one cone")
        self._hash = hash((self.ambient, self.cones))

    @classmethod
    def orthant(cls, ambient) -> "Fan":
        return cls(ambient, [Cone.orthant(ambient)])

    def sorted_cones(self) -> list[Cone]:
        key = _dense_key(self.ambient)
        return sorted(self.cones, key=lambda c: [key(g) for g in c.generators])

    def rays(self) -> tuple[MonoidVector, ...]:
        out = {g for c in self.cones for g in c.generators}
        return tuple(sorted(out, key=_dense_key(self.ambient)))

    def all_cones(self) -> frozenset:
        return frozenset(f for c in self.cones for f in c.faces())

    def has_cone(self, gens: Iterable[MonoidVector]) -> bool:
        gs = set(gens)
        return any(gs <= set(c.generators) for c in self.cones)

    def restrict(self, labels) -> frozenset:
        """All cones (faces included) whose generators live on ``labels``."""
        keep = frozenset(labels)
        return frozenset(f for f in self.all_cones() if f.support() <= keep)

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.ambient == other.ambient and self.cones == other.cones

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Fan{" + ", ".join(repr(c) for c in self.sorted_cones()) + "}"


class Sign(Enum):
    NON_NEGATIVE = "NonNegative"
    NON_POSITIVE = "NonPositive"
    ZERO = "Zero"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SignVerdict:
    sign: Sign
    positive: tuple[MonoidVector, ...]
    negative: tuple[MonoidVector, ...]


def _check_ambient(cone: Cone, v: MonoidVector) -> None:
    extra = v.support() - set(cone.ambient)
    if extra:
        names = ", ".join(sorted(label_str(x) for x in extra))
        raise ValueError(f"vector uses labels outside the cone's ambient set: {names}")


def cone_membership(cone: Cone, v: MonoidVector) -> tuple[Fraction, ...] | None:
    """Coefficients of ``v`` over the cone's generators, if all are >= 0."""
    _check_ambient(cone, v)
    if not cone.generators:
        return () if v.is_zero() else None
    cols = cone.matrix()
    coeffs = kernel.solve(cols, v.coords(cone.ambient))
    if coeffs is None or any(c < 0 for c in coeffs):
        return None
    return coeffs


def star_subdivide(fan: Fan, center: Cone | Iterable[MonoidVector]) -> Fan:
    """Stellar subdivision of ``fan`` at the barycenter of ``center``."""
    gens = center.generators if isinstance(center, Cone) else tuple(center)
    if not gens:
        raise ValueError("empty center")
    if isinstance(center, Cone) and center.ambient != fan.ambient:
        raise ValueError("center and fan have different ambient labels")
    cset = set(gens)
    if not fan.has_cone(cset):
        raise ValueError("center is not a cone of the fan")
    bary = MonoidVector([])
    for g in gens:
        bary = bary + g
    out = []
    for c in fan.cones:
        cg = set(c.generators)
        if not cset <= cg:
            out.append(c)
            continue
        for g in gens:
            out.append(Cone(fan.ambient, (cg - {g}) | {bary}))
    return Fan(fan.ambient, out)


def functional_sign(cone: Cone, f: MonoidVector) -> SignVerdict:
    """Sign pattern of ``f`` paired with each generator."""
    _check_ambient(cone, f)
    pos = tuple(g for g in cone.generators if f.dot(g) > 0)
    neg = tuple(g for g in cone.generators if f.dot(g) < 0)
    if pos and neg:
        sign = Sign.INDETERMINATE
    elif pos:
        sign = Sign.NON_NEGATIVE
    elif neg:
        sign = Sign.NON_POSITIVE
    else:
        sign = Sign.ZERO
    return SignVerdict(sign, pos, neg)


def kernel_face_check(cone: Cone, fs: Iterable[MonoidVector]) -> bool:
    """Whether the cone meets the joint kernel of ``fs`` in a face.

    Generators already in the kernel span a face inside it; the check
    fails exactly when some nonzero nonnegative combination of the other
    generators also lands in the kernel.  Decided by exact elimination.
    """
    fs = list(fs)
    for f in fs:
        _check_ambient(cone, f)
    outside = [g for g in cone.generators if any(f.dot(g) for f in fs)]
    if not outside:
        return True
    rows = [[f.dot(g) for g in outside] for f in fs]
    return not has_nonzero_nonnegative_solution(rows, len(outside))


def fans_equal(a: Fan, b: Fan) -> bool:
    if a.ambient != b.ambient:
        raise ValueError("fans live over different label sets")
    return a.cones == b.cones


def covering_defects(fan: Fan, bound: int = 5) -> list[str]:
    """Exhaustive check that the cones tile the orthant near the origin.

    Every nonzero integer vector with coordinate sum <= ``bound`` must lie
    in some max cone, and all max cones containing it must agree on the
    face whose relative interior holds it.  Returns a list of defects.
    """
    n = len(fan.ambient)
    defects: list[str] = []
    for c in fan.cones:
        if abs(c.det()) != 1:
            defects.append(f"cone {c!r} has determinant {c.det()}")

    def vectors(dim, total):
        if dim == 0:
            yield ()
            return
        for first in range(total + 1):
            for rest in vectors(dim - 1, total - first):
                yield (first,) + rest

    for coords in vectors(n, bound):
        if not any(coords):
            continue
        v = MonoidVector(zip(fan.ambient, coords))
        supports = set()
        for c in fan.cones:
            coeff = cone_membership(c, v)
            if coeff is not None:
                supports.add(frozenset(g for g, x in zip(c.generators, coeff) if x))
        if not supports:
            defects.append(f"vector {coords} is not covered")
        elif len(supports) > 1:
            defects.append(f"vector {coords} lies in the interiors of different faces")
    return defects
