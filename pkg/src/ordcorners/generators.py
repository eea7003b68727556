"""Seeded random ordered-corners spaces, morphisms and arrangements.

Used by the property tests and the CLI self-checks.  Every generator
takes a ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from itertools import product as cartesian

from .bmaps import BMap, classify
from .corners import CornersSpace, chain_space, half_line, point
from .manybody import SubspaceArrangement, close_arrangement


def random_space(
    rng: random.Random,
    max_hyps: int = 4,
    prefix: str = "H",
    interior: str = "X",
    n: int | None = None,
    max_depth: int | None = None,
    placement: str | None = None,
) -> CornersSpace:
    """A valid ordered corners space on at most ``max_hyps`` hypersurfaces.

    Each hypersurface falls below or above the interior at random, or all
    above (``placement="min"``) or all below (``placement="max"``).  Within
    each side a random order is drawn, and corners are random chains that
    together cover every hypersurface.
    """
    n = rng.randint(0, max_hyps) if n is None else n
    hyps = [f"{prefix}{i}" for i in range(1, n + 1)]
    if placement == "min":
        low = []
    elif placement == "max":
        low = list(hyps)
    elif placement is None:
        low = [h for h in hyps if rng.random() < 0.5]
    else:
        raise ValueError(f"unknown placement {placement!r}")
    up = [h for h in hyps if h not in low]
    order = [(h, interior) for h in low] + [(interior, h) for h in up]
    for side in (low, up):
        perm = side[:]
        rng.shuffle(perm)
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if rng.random() < 0.5:
                    order.append((perm[i], perm[j]))
    probe = CornersSpace(interior, hyps, order)
    facets = []
    uncovered = set(hyps)
    while uncovered:
        chain = [rng.choice(sorted(uncovered))]
        others = hyps[:]
        rng.shuffle(others)
        for h in others:
            if max_depth is not None and len(chain) >= max_depth:
                break
            if h not in chain and all(probe.comparable(h, c) for c in chain) and rng.random() < 0.7:
                chain.append(h)
        facets.append(chain)
        uncovered -= set(chain)
    return CornersSpace(interior, hyps, order, facets)


def random_map(rng: random.Random, Z: CornersSpace, X: CornersSpace) -> BMap | None:
    """A random simple b-normal map, or None if it breaks the corner rule."""
    targets = list(X.mtot())
    exps = {}
    for e in Z.hypersurfaces:
        t = rng.choice(targets)
        if t != X.interior:
            exps[(t, e)] = 1
    try:
        return BMap(Z, X, exps)
    except ValueError:
        return None


def random_morphism(rng: random.Random, Z: CornersSpace, X: CornersSpace, tries: int = 200) -> BMap:
    """A random ordered corners morphism by rejection sampling.

    Falls back to the map sending everything to the interior, which is
    always a morphism.
    """
    for _ in range(tries):
        f = random_map(rng, Z, X)
        if f is not None and classify(f).morphism:
            return f
    return BMap(Z, X, {})


def all_simple_b_normal_maps(Z: CornersSpace, X: CornersSpace):
    """Every simple b-normal exponent matrix Z -> X satisfying the corner rule."""
    targets = list(X.mtot())
    for choice in cartesian(targets, repeat=len(Z.hypersurfaces)):
        exps = {(t, e): 1 for e, t in zip(Z.hypersurfaces, choice) if t != X.interior}
        try:
            yield BMap(Z, X, exps)
        except ValueError:
            continue


def random_arrangement(rng: random.Random, max_dim: int = 4, max_raw: int = 5) -> SubspaceArrangement:
    """Closure of up to ``max_raw`` random rational subspaces of Q^n, n <= max_dim."""
    n = rng.randint(0, max_dim)
    raw = []
    for _ in range(rng.randint(0, max_raw) if n else 0):
        k = rng.randint(1, n)
        raw.append([[rng.randint(-1, 1) for _ in range(n)] for _ in range(k)])
    return close_arrangement(n, raw)


def depth_two_corpus() -> list[CornersSpace]:
    """Fixed small spaces of depth at most two, covering every interior placement."""
    spaces = [
        point(),
        half_line(True),
        half_line(False),
        chain_space(["H1", "H2"], 0),
        chain_space(["H1", "H2"], 1),
        chain_space(["H1", "H2"], 2),
        CornersSpace("X", ["H1", "H2"], [("X", "H1"), ("X", "H2")]),
        CornersSpace("X", ["H1", "H2", "H3"], [("X", "H1"), ("H1", "H2"), ("H1", "H3")], [["H1", "H2"], ["H1", "H3"]]),
    ]
    return spaces
