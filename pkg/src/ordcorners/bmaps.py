"""Rigid interior b-maps as boundary exponent matrices.

Column H of a map lists the exponents e(G, H) with which each codomain
defining function pulls back to a multiple of the defining function of H.
Positive smooth factors are not modeled.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .corners import CornersSpace, RefinedSpace, blown_space, face_poset
from .labels import label_key, label_str, sort_labels
from .monoid_fan import (
    MonoidVector,
    Sign,
    cone_membership,
    functional_sign,
    kernel_face_check,
)


class BMap:
    """Exponent matrix between two spaces.

    ``exponents`` maps (G, H) to e(G, H), G in the codomain, H in the
    domain.  Construction checks labels, signs, and that every domain
    corner lands in a codomain corner.
    """

    __slots__ = ("domain", "codomain", "columns", "_hash")

    def __init__(self, domain: CornersSpace, codomain: CornersSpace, exponents: Mapping):
        self.domain = domain
        self.codomain = codomain
        dom, cod = set(domain.hypersurfaces), set(codomain.hypersurfaces)
        cols: dict = {h: [] for h in domain.hypersurfaces}
        for (g, h), e in exponents.items():
            if h not in dom:
                raise ValueError(f"exponent column {label_str(h)} is not a domain hypersurface")
            if g not in cod:
                raise ValueError(f"exponent row {label_str(g)} is not a codomain hypersurface")
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponent e({label_str(g)},{label_str(h)}) = {e!r} is not a nonnegative integer")
            cols[h].append((g, e))
        self.columns = {h: MonoidVector(v) for h, v in cols.items()}
        for facet in domain.facets:
            img = self.image_support(facet)
            if not codomain.is_simplex(img):
                names = ",".join(label_str(x) for x in sort_labels(facet))
                raise ValueError(f"corner {{{names}}} is not mapped into a corner")
        self._hash = hash((domain, codomain, tuple(sorted(self.columns.items(), key=lambda kv: label_key(kv[0])))))

    def column(self, h) -> MonoidVector:
        return self.columns[h]

    def exponent(self, g, h) -> int:
        return self.columns[h][g]

    def exponents(self) -> dict:
        return {(g, h): e for h, col in self.columns.items() for g, e in col.items()}

    def image_support(self, labels) -> frozenset:
        out: set = set()
        for h in labels:
            out |= self.columns[h].support()
        return frozenset(out)

    def is_simple(self) -> bool:
        return all(e in (0, 1) for col in self.columns.values() for _, e in col.items())

    def is_b_normal(self) -> bool:
        return all(len(col.items()) <= 1 for col in self.columns.values())

    def f_sharp(self, h):
        """Codomain face hit by ``h``; interiors go to the interior."""
        if h == self.domain.interior:
            return self.codomain.interior
        supp = self.columns[h].support()
        if not supp:
            return self.codomain.interior
        if len(supp) > 1:
            raise ValueError(f"map is not b-normal at {label_str(h)}")
        return next(iter(supp))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cols = ", ".join(f"{label_str(h)}->{col!r}" for h, col in sorted(self.columns.items(), key=lambda kv: label_key(kv[0])))
        return f"BMap({cols})"


def identity(space: CornersSpace) -> BMap:
    return BMap(space, space, {(h, h): 1 for h in space.hypersurfaces})


def compose(g: BMap, f: BMap) -> BMap:
    """The map g after f."""
    if f.codomain != g.domain:
        raise ValueError("codomain of the first map is not the domain of the second")
    exps: dict = {}
    for h, col in f.columns.items():
        total = MonoidVector()
        for mid, e in col.items():
            total = total + g.columns[mid] * e
        for k, e in total.items():
            exps[(k, h)] = e
    return BMap(f.domain, g.codomain, exps)


@dataclass(frozen=True)
class Classification:
    simple: bool
    b_normal: bool
    ordered: bool
    interior_fibered_order: bool

    @property
    def morphism(self) -> bool:
        return self.simple and self.b_normal and self.ordered


def classify(f: BMap) -> Classification:
    simple = f.is_simple()
    normal = f.is_b_normal()
    ordered = fibered = False
    if normal:
        dom, cod = f.domain, f.codomain
        sharp = {x: f.f_sharp(x) for x in dom.mtot()}
        ordered = all(cod.le(sharp[a], sharp[b]) for a, b in dom.less)
        fibered = True
        for h in dom.hypersurfaces:
            img = sharp[h]
            for x in dom.mtot():
                if dom.lt(x, h) and not cod.le(sharp[x], img):
                    fibered = False
                if dom.lt(h, x) and not (cod.le(img, sharp[x]) or sharp[x] == cod.interior):
                    fibered = False
    return Classification(simple, normal, ordered, fibered)


def is_morphism(f: BMap) -> bool:
    return classify(f).morphism


def rational_combination(exponents: Mapping) -> MonoidVector:
    """The functional of a product of defining functions with these powers."""
    return MonoidVector(exponents)


def blowdown_map(ry: RefinedSpace) -> BMap:
    """Blow-down: each ray pulls back the base functions by its coordinates."""
    fp = face_poset(ry)
    nm = dict(fp.names)
    exps = {(g, nm[v]): e for v in fp.rays for g, e in v.items()}
    return BMap(blown_space(ry), ry.base, exps)


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError("non-integral lift coefficient on a unimodular cone")
    return int(x)


def _lift_column(v: MonoidVector, cones):
    """Coefficients of ``v`` over rays, from every listed cone containing it."""
    found = []
    for c in cones:
        coeffs = cone_membership(c, v)
        if coeffs is not None:
            found.append({g: _as_int(x) for g, x in zip(c.generators, coeffs) if x})
    return found


def lift_through_blowup(f: BMap, ry: RefinedSpace) -> BMap | None:
    """Lift of ``f`` into the blow-up ``ry`` of its codomain, if it exists.

    Each domain corner must land inside one cone of each fan carrying its
    image.  Lift columns are cone-membership coefficients; they are
    computed from every containing cone and checked to agree.
    """
    if ry.base != f.codomain:
        raise ValueError("refinement is not over the map's codomain")
    lifted: dict = {}
    for facet in f.domain.facets:
        images = {h: f.columns[h] for h in facet}
        support = f.image_support(facet)
        fans = [fan for corner, fan in ry.fans.items() if support <= corner]
        if support and not fans:
            return None
        for fan in fans:
            good = [c for c in fan.cones if all(cone_membership(c, v) is not None for v in images.values())]
            if not good:
                return None
            for h, v in images.items():
                for coeffs in _lift_column(v, good):
                    prev = lifted.setdefault(h, coeffs)
                    if prev != coeffs:
                        raise ArithmeticError(f"lift of {label_str(h)} depends on the chosen cone")
    codomain = blown_space(ry)
    exps = {}
    for h in f.domain.hypersurfaces:
        for ray, e in lifted.get(h, {}).items():
            exps[(ry.name(ray), h)] = e
    return BMap(f.domain, codomain, exps)


class Smoothness(Enum):
    TO_ZERO_INF = "SmoothTo[0,inf)"
    TO_INF = "SmoothTo(0,inf]"
    MIXED = "SmoothTo[0,inf]"
    NOT_SMOOTH = "NotSmooth"


@dataclass(frozen=True)
class SigmaReport:
    cones: tuple  # (facet labels, Cone, SignVerdict)
    overall: Smoothness
    vanishing: tuple  # rays where the function vanishes
    vanishing_inverse: tuple  # rays where its reciprocal vanishes


def _check_support(r: RefinedSpace, s: MonoidVector) -> None:
    extra = s.support() - set(r.base.hypersurfaces)
    if extra:
        raise ValueError("functional uses unknown labels: " + ", ".join(sorted(map(label_str, extra))))


def sigma_lift(r: RefinedSpace, s: MonoidVector) -> SigmaReport:
    """Sign of a rational combination of defining functions on each cone.

    The constant function (s = 0) is reported as smooth into [0, inf).
    """
    _check_support(r, s)
    rows = []
    signs = set()
    for facet in r.base.facets:
        fan = r.fans[facet]
        local = s.restrict(facet)
        for c in fan.sorted_cones():
            v = functional_sign(c, local)
            rows.append((sort_labels(facet), c, v))
            signs.add(v.sign)
    if Sign.INDETERMINATE in signs:
        overall = Smoothness.NOT_SMOOTH
    elif Sign.NON_NEGATIVE in signs and Sign.NON_POSITIVE in signs:
        overall = Smoothness.MIXED
    elif Sign.NON_POSITIVE in signs:
        overall = Smoothness.TO_INF
    else:
        overall = Smoothness.TO_ZERO_INF
    rays = r.rays()
    vanish = tuple(v for v in rays if s.dot(v) > 0)
    vanish_inv = tuple(v for v in rays if s.dot(v) < 0)
    return SigmaReport(tuple(rows), overall, vanish, vanish_inv)


def psub_lift(r: RefinedSpace, ss) -> bool:
    """Whether the level sets of ``ss`` lift to p-submanifolds."""
    ss = list(ss)
    for s in ss:
        _check_support(r, s)
    for facet, fan in r.fans.items():
        local = [s.restrict(facet) for s in ss]
        if not all(kernel_face_check(c, local) for c in fan.cones):
            return False
    return True

