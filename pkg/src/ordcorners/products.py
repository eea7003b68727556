"""Ordered products, relative cones, joins, and fiber products.

Product hypersurfaces are pairs (a, b) of a face of each factor, interiors
allowed, that are comparable to the pair of interiors.  Coordinates live
on the cartesian product: the pair (a, b) has ray vector
e(a, Y0) + e(X0, b) with interior components dropped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as cartesian

from . import corners as C
from .bmaps import BMap, classify, psub_lift
from .corners import CornersSpace, RefinedSpace
from .labels import PairLabel, fresh_label, label_key, label_str
from .monoid_fan import Cone, Fan, MonoidVector, fans_equal, vector_name


# -- posets -----------------------------------------------------------------


def pair_le(X: CornersSpace, Y: CornersSpace, p, q) -> bool:
    return X.le(p[0], q[0]) and Y.le(p[1], q[1])


def pair_lt(X: CornersSpace, Y: CornersSpace, p, q) -> bool:
    return p != q and pair_le(X, Y, p, q)


def product_elements(X: CornersSpace, Y: CornersSpace) -> tuple:
    """Pairs comparable to the basepoint, basepoint included."""
    base = (X.interior, Y.interior)
    out = [
        PairLabel(a, b)
        for a, b in cartesian(X.mtot(), Y.mtot())
        if pair_le(X, Y, (a, b), base) or pair_le(X, Y, base, (a, b))
    ]
    return tuple(sorted(out, key=label_key))


def maximal_chains(elements, lt) -> list[tuple]:
    """Every maximal chain of a finite poset, each listed bottom to top."""
    elements = list(elements)
    covers = {
        a: [b for b in elements if lt(a, b) and not any(lt(a, c) and lt(c, b) for c in elements)]
        for a in elements
    }
    minimal = [a for a in elements if not any(lt(b, a) for b in elements)]
    out = []

    def walk(chain):
        nxt = covers[chain[-1]]
        if not nxt:
            out.append(tuple(chain))
            return
        for b in nxt:
            walk(chain + [b])

    for m in minimal:
        walk([m])
    return out


def linear_extension(elements, lt, rng: random.Random | None = None) -> list:
    """A linear extension, uniformly choosing among minimal elements."""
    left = list(sorted(elements, key=label_key))
    out = []
    while left:
        mins = [a for a in left if not any(lt(b, a) for b in left)]
        pick = rng.choice(mins) if rng else mins[0]
        out.append(pick)
        left.remove(pick)
    return out


# -- ordered product --------------------------------------------------------


def cartesian_base(X: CornersSpace, Y: CornersSpace) -> CornersSpace:
    """The unblown product: corners are products of corners.

    Its order is the product order, which in general breaks the ordered
    corners axiom until the product is blown up.
    """
    x0, y0 = X.interior, Y.interior
    hx = [PairLabel(h, y0) for h in X.hypersurfaces]
    hy = [PairLabel(x0, g) for g in Y.hypersurfaces]
    mt = hx + hy + [PairLabel(x0, y0)]
    order = [(p, q) for p in mt for q in mt if pair_lt(X, Y, p, q)]
    facets = []
    for s in X.facets or (frozenset(),):
        for t in Y.facets or (frozenset(),):
            f = [PairLabel(h, y0) for h in s] + [PairLabel(x0, g) for g in t]
            if f:
                facets.append(f)
    return CornersSpace(PairLabel(x0, y0), hx + hy, order, facets)


def pair_vector(X: CornersSpace, Y: CornersSpace, p) -> MonoidVector:
    a, b = p
    parts = []
    if a != X.interior:
        parts.append((PairLabel(a, Y.interior), 1))
    if b != Y.interior:
        parts.append((PairLabel(X.interior, b), 1))
    return MonoidVector(parts)


def _product_names_order(X, Y):
    elems = product_elements(X, Y)
    vec = {p: pair_vector(X, Y, p) for p in elems}
    names = {vec[p]: p for p in elems}
    order = [(vec[p], vec[q]) for p in elems for q in elems if pair_lt(X, Y, p, q)]
    return elems, vec, names, order


def _check_inputs(*spaces):
    for s in spaces:
        problems = C.validate(s)
        if problems:
            raise ValueError("invalid space: " + "; ".join(problems))


def ordered_product_fan(X: CornersSpace, Y: CornersSpace) -> RefinedSpace:
    """Fans generated by maximal chains of pairs, one fan per product corner."""
    _check_inputs(X, Y)
    base = cartesian_base(X, Y)
    elems, vec, names, order = _product_names_order(X, Y)
    basept = PairLabel(X.interior, Y.interior)
    lt = lambda p, q: pair_lt(X, Y, p, q)
    fans = {}
    for s in X.facets or (frozenset(),):
        for t in Y.facets or (frozenset(),):
            if not s and not t:
                continue
            sub = [p for p in elems if (p[0] in s or p[0] == X.interior) and (p[1] in t or p[1] == Y.interior)]
            ambient = [PairLabel(h, Y.interior) for h in s] + [PairLabel(X.interior, g) for g in t]
            cones = []
            for chain in maximal_chains(sub, lt):
                if basept not in chain:
                    raise AssertionError("a maximal chain misses the basepoint")
                cones.append(Cone(ambient, [vec[p] for p in chain if p != basept]))
            fans[frozenset(ambient)] = Fan(ambient, cones)
    return RefinedSpace(base, fans, names, order)


def blowup_centers(X: CornersSpace, Y: CornersSpace, rng: random.Random | None = None) -> list:
    """An admissible sequence of pairs (H, G) to blow up.

    Lower pairs first, ascending in the product order; then upper pairs,
    descending.  ``rng`` picks a random linear extension in each phase.
    """
    lt = lambda p, q: pair_lt(X, Y, p, q)
    low = [PairLabel(h, g) for h in X.lower() for g in Y.lower()]
    up = [PairLabel(h, g) for h in X.upper() for g in Y.upper()]
    gt = lambda p, q: lt(q, p)
    return linear_extension(low, lt, rng) + linear_extension(up, gt, rng)


def _meet(space: CornersSpace, h, k) -> bool:
    return h == k or space.is_simplex(frozenset((h, k)))


def inadmissible_orders(X: CornersSpace, Y: CornersSpace) -> list[list]:
    """Sequences that blow up some pair before one it must follow.

    For each comparable pair of centers within a phase, the later center
    is moved to just before the earlier one.  Pairs whose centers are
    disjoint are skipped, since those blow-ups commute.
    """
    seq = blowup_centers(X, Y)
    lowset = {PairLabel(h, g) for h in X.lower() for g in Y.lower()}
    out = []
    for i, a in enumerate(seq):
        for j in range(i + 1, len(seq)):
            b = seq[j]
            if (a in lowset) != (b in lowset):
                continue
            if not (_meet(X, a.left, b.left) and _meet(Y, a.right, b.right)):
                continue
            if pair_lt(X, Y, a, b) or pair_lt(X, Y, b, a):
                bad = seq[:i] + [b] + [x for x in seq[i:] if x != b]
                out.append(bad)
    return out


def ordered_product_blowup(X: CornersSpace, Y: CornersSpace, rng: random.Random | None = None, centers=None) -> RefinedSpace:
    """The product by iterated blow-up of the cartesian corners.

    ``centers`` overrides the blow-up sequence; an inadmissible sequence
    may raise ValueError when a later center is no longer a cone.
    """
    _check_inputs(X, Y)
    base = cartesian_base(X, Y)
    r = C.initial_refinement(base, check=False)
    seq = blowup_centers(X, Y, rng) if centers is None else list(centers)
    for h, g in seq:
        r = C.blow_up_face(r, [MonoidVector.unit(PairLabel(h, Y.interior)), MonoidVector.unit(PairLabel(X.interior, g))])
    _, _, names, order = _product_names_order(X, Y)
    return RefinedSpace(base, r.fans, names, order)


def same_refinement(a: RefinedSpace, b: RefinedSpace) -> bool:
    if a.base != b.base:
        return False
    return all(fans_equal(a.fans[f], b.fans[f]) for f in a.base.facets)


def product_space(X: CornersSpace, Y: CornersSpace) -> CornersSpace:
    return C.blown_space(ordered_product_fan(X, Y))


def lifted_projections(X: CornersSpace, Y: CornersSpace, P: CornersSpace | None = None):
    """Projections from the product to each factor."""
    P = product_space(X, Y) if P is None else P
    px = {(p[0], p): 1 for p in P.hypersurfaces if p[0] != X.interior}
    py = {(p[1], p): 1 for p in P.hypersurfaces if p[1] != Y.interior}
    return BMap(P, X, px), BMap(P, Y, py)


def universal_factorization(f: BMap, g: BMap, P: CornersSpace | None = None) -> BMap:
    """The map into the product whose projections are f and g."""
    if f.domain != g.domain:
        raise ValueError("maps have different domains")
    for m in (f, g):
        if not classify(m).morphism:
            raise ValueError("factorization needs simple, b-normal, ordered maps")
    X, Y = f.codomain, g.codomain
    P = product_space(X, Y) if P is None else P
    exps = {}
    for e in f.domain.hypersurfaces:
        p = PairLabel(f.f_sharp(e), g.f_sharp(e))
        if p != P.interior:
            exps[(p, e)] = 1
    return BMap(f.domain, P, exps)


# -- cones and joins ---------------------------------------------------------


def relative_cone(X: CornersSpace, variant: str, split=None, principal: str = "min", xi: str = "xi"):
    """Cone X x [0, inf) with a new principal hypersurface.

    ``max``: every old hypersurface goes below the interior and the
    principal one below all.  ``min``: everything above the interior, the
    principal one on top.  ``relative``: hypersurfaces listed in ``split``
    (default: those already below the interior) go below it, the rest
    above, and ``principal`` picks whether the new hypersurface is the
    global minimum or maximum.  Returns (space, principal label).
    """
    x0 = X.interior
    label = fresh_label(X.mtot(), xi)
    hyps = list(X.hypersurfaces)
    inner = [(a, b) for a, b in X.less if x0 not in (a, b)]
    if variant == "max":
        below, bottom = set(hyps), True
    elif variant == "min":
        below, bottom = set(), False
    elif variant == "relative":
        below = set(X.lower()) if split is None else set(split)
        if principal not in ("min", "max"):
            raise ValueError("principal must be 'min' or 'max'")
        bottom = principal == "min"
    else:
        raise ValueError(f"unknown variant {variant!r}")
    order = inner + [(h, x0) if h in below else (x0, h) for h in hyps]
    order += [(label, y) for y in hyps + [x0]] if bottom else [(y, label) for y in hyps + [x0]]
    facets = [set(f) | {label} for f in X.facets] or [{label}]
    return CornersSpace(x0, hyps + [label], order, facets), label


@dataclass(frozen=True)
class FibrationTag:
    """Fiber and base of a boundary fibration, with their index sets.

    Descriptors are tuples such as ("Join", "F[H]", "F[G]"); joins carry
    only index sets and leave descriptors empty.
    """

    fiber: tuple
    base: tuple
    fiber_index: tuple
    base_index: tuple


@dataclass
class Join:
    space: CornersSpace
    xi: object
    eta: object
    cone_x: CornersSpace
    cone_y: CornersSpace
    cone_product: RefinedSpace
    quotient: dict  # hypersurface -> ray vector in the cone product
    tags: dict = field(default_factory=dict)


def _index_tags(space: CornersSpace) -> dict:
    tags = {}
    for h in space.hypersurfaces:
        up = tuple(x for x in space.above(h) if x != space.interior)
        down = tuple(x for x in space.below(h) if x != space.interior)
        tags[h] = FibrationTag((), (), up, down)
    return tags


def join(X: CornersSpace, Y: CornersSpace, variant: str = "max", principal: str | None = None) -> Join:
    """The principal hypersurface of the product of two relative cones."""
    if principal is None:
        principal = "min" if variant == "max" else "max"
    if variant == "max" and principal != "min" or variant == "min" and principal != "max":
        raise ValueError("the max join needs a minimal principal face, the min join a maximal one")
    cx, xi = relative_cone(X, variant, principal=principal, xi="xi")
    cy, eta = relative_cone(Y, variant, principal=principal, xi="eta")
    prod = ordered_product_fan(cx, cy)
    top = PairLabel(xi, eta)
    v_top = pair_vector(cx, cy, top)
    link: set = set()
    facets = []
    for fan in prod.fans.values():
        for c in fan.cones:
            if v_top in c.generators:
                rest = [prod.names[g] for g in c.generators if g != v_top]
                facets.append(rest)
                link.update(rest)
    order = [(p, q) for p in link | {top} for q in link | {top} if pair_lt(cx, cy, p, q)]
    space = CornersSpace(top, link, order, facets)
    quotient = {p: pair_vector(cx, cy, p) for p in link}
    return Join(space, xi, eta, cx, cy, prod, quotient, _index_tags(space))


def join_direct(X: CornersSpace, Y: CornersSpace, variant: str = "max", principal: str | None = None) -> CornersSpace:
    """The join by blowing up X x Y x [0,1] directly.

    Hypersurfaces of the interval are I:0 and I:1; those of X and Y are
    prefixed X: and Y:.  The result is named by blown-up ray vectors.
    """
    if principal is None:
        principal = "min" if variant == "max" else "max"
    if variant == "max":
        lx, ux, ly, uy = X.hypersurfaces, (), Y.hypersurfaces, ()
    elif variant == "min":
        lx, ux, ly, uy = (), X.hypersurfaces, (), Y.hypersurfaces
    else:
        lx, ux, ly, uy = X.lower(), X.upper(), Y.lower(), Y.upper()
    px = lambda h: "X:" + label_str(h)
    py = lambda g: "Y:" + label_str(g)
    hyps = [px(h) for h in X.hypersurfaces] + [py(g) for g in Y.hypersurfaces] + ["I:0", "I:1"]
    facets = []
    for s in X.facets or (frozenset(),):
        for t in Y.facets or (frozenset(),):
            core = [px(h) for h in s] + [py(g) for g in t]
            facets += [core + ["I:0"], core + ["I:1"]]
    base = CornersSpace("J", hyps, [], facets)
    u = MonoidVector.unit
    i0, i1 = u("I:0"), u("I:1")
    ltx = lambda a, b: X.lt(a, b)
    lty = lambda a, b: Y.lt(a, b)
    gtx = lambda a, b: X.lt(b, a)
    gty = lambda a, b: Y.lt(b, a)
    plt = lambda p, q: pair_lt(X, Y, p, q)
    pgt = lambda p, q: pair_lt(X, Y, q, p)
    low = [PairLabel(h, g) for h in lx for g in ly]
    up = [PairLabel(h, g) for h in ux for g in uy]
    if principal == "min":
        seq = [{u(px(h)), i0} for h in linear_extension(lx, ltx)]
        seq += [{u(py(g)), i1} for g in linear_extension(ly, lty)]
        pairs = linear_extension(low, plt) + linear_extension(up, pgt)
    else:
        seq = [{u(px(h)), i0} for h in linear_extension(ux, gtx)]
        seq += [{u(py(g)), i1} for g in linear_extension(uy, gty)]
        pairs = linear_extension(up, pgt) + linear_extension(low, plt)
    seq += [{u(px(h)), u(py(g))} for h, g in pairs]
    r = C.initial_refinement(base, check=False)
    for center in seq:
        r = C.blow_up_face(r, center)
    return C.blown_space(r)


def join_to_direct_labels(j: Join, X: CornersSpace, Y: CornersSpace) -> dict:
    """Name of each join hypersurface in the direct construction."""
    def part(a, which):
        if which == 0:
            if a == j.xi:
                return [("I:1", 1)]
            return [] if a == X.interior else [("X:" + label_str(a), 1)]
        if a == j.eta:
            return [("I:0", 1)]
        return [] if a == Y.interior else [("Y:" + label_str(a), 1)]

    return {p: vector_name(MonoidVector(part(p[0], 0) + part(p[1], 1))) for p in j.space.hypersurfaces}


def join_matches_direct(X: CornersSpace, Y: CornersSpace, variant: str = "max", principal: str | None = None) -> bool:
    """Whether the cone-product join and the direct blow-up agree ray for ray."""
    j = join(X, Y, variant, principal)
    d = join_direct(X, Y, variant, principal)
    m = join_to_direct_labels(j, X, Y)
    if len(set(m.values())) != len(m) or set(m.values()) != set(d.hypersurfaces):
        return False
    return {frozenset(m[p] for p in f) for f in j.space.facets} == set(d.facets)


@dataclass(frozen=True)
class JoinEquivalence:
    ok: bool
    bijection: dict  # max-join label -> min-join label
    problems: tuple


def join_equivalence(X: CornersSpace, Y: CornersSpace) -> JoinEquivalence:
    """Exchange xi with X's interior and eta with Y's, max join to min join."""
    jmax, jmin = join(X, Y, "max"), join(X, Y, "min")
    x0, y0 = X.interior, Y.interior

    def swap(p):
        a, b = p
        a = x0 if a == jmax.xi else (jmin.xi if a == x0 else a)
        b = y0 if b == jmax.eta else (jmin.eta if b == y0 else b)
        return PairLabel(a, b)

    problems = []
    bij = {p: swap(p) for p in jmax.space.hypersurfaces}
    if sorted(bij.values(), key=label_key) != list(jmin.space.hypersurfaces):
        problems.append("exchange is not a bijection of hypersurfaces")
    if {frozenset(bij[p] for p in f) for f in jmax.space.facets} != set(jmin.space.facets):
        problems.append("exchange does not carry corners to corners")
    for p in jmax.space.hypersurfaces:
        for q in jmax.space.hypersurfaces:
            if jmax.space.lt(p, q) != jmin.space.lt(bij.get(p), bij.get(q)):
                problems.append(f"order differs at {label_str(p)}, {label_str(q)}")
    for p in jmax.space.hypersurfaces:
        t, s = jmax.tags[p], jmin.tags.get(bij[p])
        if s is None or {bij[x] for x in t.fiber_index} != set(s.fiber_index) or {bij[x] for x in t.base_index} != set(s.base_index):
            problems.append(f"index sets differ at {label_str(p)}")
    # linear exchange of generators, modulo the principal ray
    if (jmax.xi, jmax.eta) != (jmin.xi, jmin.eta):
        raise AssertionError("principal labels differ between the joins")
    xi_l, eta_l = PairLabel(jmax.xi, y0), PairLabel(x0, jmax.eta)
    xi_v, eta_v = MonoidVector.unit(xi_l), MonoidVector.unit(eta_l)
    top = xi_v + eta_v

    def psi(v):
        out = MonoidVector()
        for lab, c in v.items():
            if lab == xi_l:
                img = eta_v
            elif lab == eta_l:
                img = xi_v
            elif lab[1] == y0:
                img = MonoidVector.unit(lab) + eta_v
            else:
                img = xi_v + MonoidVector.unit(lab)
            out = out + img * c
        return out

    for p in jmax.space.hypersurfaces:
        if bij[p] not in jmin.quotient:
            continue
        residue = psi(jmax.quotient[p]) - jmin.quotient[bij[p]]
        if residue != top * residue[xi_l]:
            problems.append(f"generator exchange fails at {label_str(p)}")
    return JoinEquivalence(not problems, bij, tuple(problems))


# -- fibrations ----------------------------------------------------------------


def fibration_assignment(X: CornersSpace, Y: CornersSpace) -> dict:
    """Fiber and base of every product hypersurface."""
    P = product_space(X, Y)
    x0, y0 = X.interior, Y.interior
    basept = P.interior
    out = {}
    for p in P.hypersurfaces:
        h, g = p
        F = lambda a, whole: label_str(whole) if a in (x0, y0) else f"F[{label_str(a)}]"
        B = lambda a, whole: label_str(whole) if a in (x0, y0) else f"B[{label_str(a)}]"
        if P.lt(p, basept):
            if h == x0 or g == y0:
                fiber = ("Single", f"F[{label_str(g if h == x0 else h)}]")
            else:
                fiber = ("Join", f"F[{label_str(h)}]", f"F[{label_str(g)}]")
            base = ("OrderedProduct", B(h, x0), B(g, y0))
        else:
            fiber = ("OrderedProduct", F(h, x0), F(g, y0))
            if h == x0 or g == y0:
                base = ("Single", f"B[{label_str(g if h == x0 else h)}]")
            else:
                base = ("Join", f"B[{label_str(h)}]", f"B[{label_str(g)}]")
        up = tuple(q for q in P.above(p) if q != basept)
        down = tuple(q for q in P.below(p) if q != basept)
        out[p] = FibrationTag(fiber, base, up, down)
    return out


@dataclass(frozen=True)
class FiberProduct:
    elements: tuple
    order: frozenset
    tags: dict
    functionals: dict
    psub_ok: bool


def fiber_product(f: BMap, g: BMap) -> FiberProduct:
    """Pairs over a common face of Z, with the p-submanifold check."""
    if f.codomain != g.codomain:
        raise ValueError("maps have different codomains")
    for m in (f, g):
        if not classify(m).morphism:
            raise ValueError("fiber products need simple, b-normal, ordered maps")
    X, Y, Z = f.domain, g.domain, f.codomain
    elems = tuple(p for p in product_elements(X, Y) if f.f_sharp(p[0]) == g.f_sharp(p[1]))
    order = frozenset((p, q) for p in elems for q in elems if pair_lt(X, Y, p, q))
    tags = {}
    for p in elems:
        if p == (X.interior, Y.interior):
            continue
        proper = p[0] != X.interior and p[1] != Y.interior
        tags[p] = "join" if proper and f.f_sharp(p[0]) == Z.interior else "fiber-product"
    sigmas = {}
    for e in Z.hypersurfaces:
        parts = [(PairLabel(h, Y.interior), f.exponent(e, h)) for h in X.hypersurfaces]
        parts += [(PairLabel(X.interior, k), -g.exponent(e, k)) for k in Y.hypersurfaces]
        sigmas[e] = MonoidVector(parts)
    ok = psub_lift(ordered_product_fan(X, Y), sigmas.values())
    return FiberProduct(elems, order, tags, sigmas, ok)
