"""Ordered corners spaces, their refinements, and face posets of blow-ups.

A space is a set of hypersurface labels with a strict partial order that
also places one honorary interior label, plus a corner complex.  The
complex is stored by its maximal simplices only; products of a few small
factors already have corner complexes too large to list in full.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .labels import label_key, label_str, sort_labels
from .monoid_fan import Fan, MonoidVector, star_subdivide, vector_name

ZERO = MonoidVector()


def transitive_closure(pairs, elements) -> frozenset:
    """Closure of a relation given as (a, b) pairs; raises on a cycle."""
    succ = {e: set() for e in elements}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    closed = set()
    for start in succ:
        seen = set()
        stack = list(succ[start])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        if start in seen:
            raise ValueError(f"order has a cycle through {label_str(start)}")
        closed.update((start, x) for x in seen)
    return frozenset(closed)


def _facet_key(facet) -> tuple:
    return tuple(label_key(x) for x in sort_labels(facet))


def maximal_sets(sets) -> tuple[frozenset, ...]:
    """Inclusion-maximal members of ``sets``, empty set dropped, sorted."""
    uniq = {frozenset(s) for s in sets if s}
    out = [s for s in uniq if not any(s < t for t in uniq)]
    return tuple(sorted(out, key=_facet_key))


class CornersSpace:
    """Hypersurfaces, an order with an interior element, and corner facets.

    ``order`` is any generating set of strict relations (a, b) meaning
    a < b; it is closed on construction.  Hypersurfaces not listed in any
    corner get a singleton facet.  Construction does not check the ordered
    corners axiom; ``validate`` reports breaches.
    """

    __slots__ = ("interior", "hypersurfaces", "less", "facets", "_hash")

    def __init__(self, interior, hypersurfaces, order=(), corners=()):
        self.interior = interior
        self.hypersurfaces = sort_labels(set(hypersurfaces))
        if interior in self.hypersurfaces:
            raise ValueError(f"interior label {label_str(interior)} is also a hypersurface")
        if len({label_key(x) for x in self.mtot()}) != len(self.mtot()):
            raise ValueError("two labels print the same")
        self.less = transitive_closure(order, self.mtot())
        facets = [frozenset(c) for c in corners]
        covered = set().union(*facets) if facets else set()
        facets += [frozenset([h]) for h in self.hypersurfaces if h not in covered]
        self.facets = maximal_sets(facets)
        self._hash = hash((self.interior, self.hypersurfaces, self.less, frozenset(self.facets)))

    def mtot(self) -> tuple:
        return self.hypersurfaces + (self.interior,)

    def lt(self, a, b) -> bool:
        return (a, b) in self.less

    def le(self, a, b) -> bool:
        return a == b or (a, b) in self.less

    def comparable(self, a, b) -> bool:
        return self.le(a, b) or self.le(b, a)

    def lower(self) -> tuple:
        """Hypersurfaces below the interior."""
        return tuple(h for h in self.hypersurfaces if self.lt(h, self.interior))

    def upper(self) -> tuple:
        """Hypersurfaces above the interior."""
        return tuple(h for h in self.hypersurfaces if self.lt(self.interior, h))

    def below(self, x) -> tuple:
        return tuple(y for y in self.mtot() if self.lt(y, x))

    def above(self, x) -> tuple:
        return tuple(y for y in self.mtot() if self.lt(x, y))

    def covering_edges(self) -> tuple:
        edges = []
        for a, b in self.less:
            if not any((a, c) in self.less and (c, b) in self.less for c in self.mtot()):
                edges.append((a, b))
        return tuple(sorted(edges, key=lambda e: (label_key(e[0]), label_key(e[1]))))

    def is_simplex(self, labels) -> bool:
        s = frozenset(labels)
        return not s or any(s <= f for f in self.facets)

    def incident(self, a, b) -> bool:
        return self.is_simplex({a, b})

    def simplices(self) -> tuple[frozenset, ...]:
        """Every nonempty simplex; only for small complexes."""
        out = set()
        for f in self.facets:
            for r in range(1, len(f) + 1):
                out.update(frozenset(c) for c in combinations(f, r))
        return tuple(sorted(out, key=_facet_key))

    def depth(self) -> int:
        return max((len(f) for f in self.facets), default=0)

    def relabel(self, mapping: Mapping) -> "CornersSpace":
        m = lambda x: mapping.get(x, x)
        return CornersSpace(
            m(self.interior),
            [m(h) for h in self.hypersurfaces],
            [(m(a), m(b)) for a, b in self.less],
            [[m(h) for h in f] for f in self.facets],
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CornersSpace)
            and self.interior == other.interior
            and self.hypersurfaces == other.hypersurfaces
            and self.less == other.less
            and set(self.facets) == set(other.facets)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        order = ", ".join(f"{label_str(a)}<{label_str(b)}" for a, b in self.covering_edges())
        facets = " ".join("{" + ",".join(label_str(x) for x in sort_labels(f)) + "}" for f in self.facets)
        return f"CornersSpace(interior={label_str(self.interior)}; {order}; {facets})"


def validate(space: CornersSpace) -> list[str]:
    """Breaches of the ordered corners axioms, as readable strings."""
    out = []
    known = set(space.mtot())
    for a, b in sorted(space.less, key=lambda e: (label_key(e[0]), label_key(e[1]))):
        for x in (a, b):
            if x not in known:
                out.append(f"order mentions unknown label {label_str(x)}")
    for f in space.facets:
        if space.interior in f:
            out.append("interior label appears in a corner")
        for x in f:
            if x not in known:
                out.append(f"corner mentions unknown label {label_str(x)}")
        for a, b in combinations(sort_labels(f), 2):
            if not space.comparable(a, b):
                out.append(f"incomparable hypersurfaces {label_str(a)} and {label_str(b)} share a corner")
    for h in space.hypersurfaces:
        if not space.comparable(h, space.interior):
            out.append(f"hypersurface {label_str(h)} is not comparable to the interior")
    return sorted(set(out))


def minimal_suborder(space: CornersSpace) -> CornersSpace:
    """Keep only relations between intersecting hypersurfaces and with the
    interior, then close transitively."""
    keep = [
        (a, b)
        for a, b in space.less
        if space.interior in (a, b) or space.incident(a, b)
    ]
    return CornersSpace(space.interior, space.hypersurfaces, keep, space.facets)


def point(interior="X") -> CornersSpace:
    return CornersSpace(interior, [])


def chain_space(labels, n_below: int, interior="X") -> CornersSpace:
    """A single corner whose hypersurfaces form the chain ``labels``.

    The first ``n_below`` sit under the interior, the rest above it.
    """
    labels = list(labels)
    seq = labels[:n_below] + [interior] + labels[n_below:]
    order = list(zip(seq, seq[1:]))
    return CornersSpace(interior, labels, order, [labels] if labels else [])


def half_line(interior_minimal: bool = True, label="H", interior="X") -> CornersSpace:
    return chain_space([label], 0 if interior_minimal else 1, interior)


class RefinedSpace:
    """A space together with a fan on every maximal corner.

    Fans on different facets must agree on the faces they share.  Rays are
    vectors in the lattice spanned by the base hypersurfaces, so equal
    vectors in different fans are the same blown-up hypersurface.
    ``names`` optionally labels rays (and ``ZERO`` for the interior);
    ``order`` optionally orders rays and ``ZERO``.
    """

    __slots__ = ("base", "fans", "names", "order")

    def __init__(self, base: CornersSpace, fans: Mapping, names: Mapping | None = None, order=None):
        self.base = base
        self.fans = {frozenset(k): v for k, v in fans.items()}
        if set(self.fans) != set(base.facets):
            raise ValueError("fans must be given on exactly the maximal corners")
        for facet, fan in self.fans.items():
            if fan.ambient != sort_labels(facet):
                raise ValueError("fan ambient differs from its corner")
        self.names = dict(names or {})
        self.order = None if order is None else transitive_closure(order, ())
        problems = compatibility_defects(self)
        if problems:
            raise ValueError("; ".join(problems))

    def sorted_facets(self) -> tuple:
        return tuple(f for f in self.base.facets)

    def rays(self) -> tuple[MonoidVector, ...]:
        allr = {g for fan in self.fans.values() for g in fan.rays()}
        return tuple(sorted(allr, key=MonoidVector.sort_key))

    def name(self, v: MonoidVector):
        if v in self.names:
            return self.names[v]
        if v.is_zero():
            return self.base.interior
        return vector_name(v)

    def fans_key(self) -> dict:
        return {f: self.fans[f].cones for f in self.base.facets}

    def same_fans(self, other: "RefinedSpace") -> bool:
        return self.base == other.base and self.fans_key() == other.fans_key()

    def __repr__(self) -> str:
        return "RefinedSpace(" + "; ".join(repr(self.fans[f]) for f in self.base.facets) + ")"


def _restricted(fan: Fan, labels) -> frozenset:
    """Maximal faces of ``fan`` inside the coordinate face on ``labels``.

    A unimodular cone meets a coordinate face in the face spanned by its
    generators supported there, so the maximal ones determine all faces.
    """
    keep = frozenset(labels)
    return frozenset(maximal_sets(frozenset(g for g in c.generators if g.support() <= keep) for c in fan.cones))


def compatibility_defects(r: RefinedSpace) -> list[str]:
    out = []
    facets = r.base.facets
    for a, b in combinations(facets, 2):
        shared = a & b
        if not shared:
            continue
        if _restricted(r.fans[a], shared) != _restricted(r.fans[b], shared):
            names = ",".join(label_str(x) for x in sort_labels(shared))
            out.append(f"fans disagree on the shared face {{{names}}}")
    return out


def initial_refinement(space: CornersSpace, check: bool = True) -> RefinedSpace:
    """Orthant fans on every corner.

    ``check=False`` skips validation, for cartesian products that only
    become ordered after blow-up.
    """
    problems = validate(space) if check else []
    if problems:
        raise ValueError("invalid space: " + "; ".join(problems))
    fans = {f: Fan.orthant(f) for f in space.facets}
    names = {MonoidVector.unit(h): h for h in space.hypersurfaces}
    names[ZERO] = space.interior
    unit = {h: MonoidVector.unit(h) for h in space.hypersurfaces}
    unit[space.interior] = ZERO
    order = [(unit[a], unit[b]) for a, b in space.less]
    return RefinedSpace(space, fans, names, order)


def blow_up_face(r: RefinedSpace, center: Iterable[MonoidVector]) -> RefinedSpace:
    """Blow up the face with generators ``center`` in every fan carrying it.

    Raises ValueError when some fan supports the center's labels but does
    not contain it as a cone, or when no fan supports it at all.
    """
    center = frozenset(center)
    if not center:
        raise ValueError("empty center")
    support = frozenset().union(*(v.support() for v in center))
    new = dict(r.fans)
    hit = False
    for facet, fan in r.fans.items():
        if not support <= facet:
            continue
        if not fan.has_cone(center):
            raise ValueError(
                "center " + "{" + ", ".join(sorted(vector_name(v) for v in center)) + "}"
                " is not a cone of the fan on {" + ",".join(label_str(x) for x in sort_labels(facet)) + "}"
            )
        new[facet] = star_subdivide(fan, center)
        hit = True
    if not hit:
        raise ValueError("no corner supports the center")
    return RefinedSpace(r.base, new, r.names)


@dataclass(frozen=True)
class FacePoset:
    """Blown-up hypersurfaces, their corner facets, and an optional order.

    ``order`` relates rays and ``ZERO`` (the interior) when present.
    """

    rays: tuple
    facets: tuple
    order: frozenset | None
    names: tuple  # (ray, label) pairs, ZERO included

    def name(self, v):
        return dict(self.names)[v]

    def incident(self, a, b) -> bool:
        return any({a, b} <= f for f in self.facets)

    def incidence_edges(self) -> tuple:
        pairs = set()
        for f in self.facets:
            for a, b in combinations(sorted(f, key=MonoidVector.sort_key), 2):
                pairs.add((a, b))
        return tuple(sorted(pairs, key=lambda e: (e[0].sort_key(), e[1].sort_key())))


def face_poset(r: RefinedSpace) -> FacePoset:
    rays = r.rays()
    facets = maximal_sets(frozenset(c.generators) for fan in r.fans.values() for c in fan.cones)
    order = None
    if r.order is not None:
        keep = set(rays) | {ZERO}
        order = frozenset((a, b) for a, b in r.order if a in keep and b in keep)
    names = tuple((v, r.name(v)) for v in (ZERO,) + rays)
    return FacePoset(rays, facets, order, names)


def blown_space(r: RefinedSpace) -> CornersSpace:
    """The blow-up as a CornersSpace over ray names (order empty if unknown)."""
    fp = face_poset(r)
    nm = dict(fp.names)
    order = [] if fp.order is None else [(nm[a], nm[b]) for a, b in fp.order]
    return CornersSpace(nm[ZERO], [nm[v] for v in fp.rays], order, [[nm[v] for v in f] for f in fp.facets])
