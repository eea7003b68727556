import random
from itertools import product as cartesian

import pytest
from hypothesis import given, settings, strategies as st

from ordcorners import corners as C
from ordcorners.bmaps import (
    BMap,
    Smoothness,
    blowdown_map,
    classify,
    compose,
    identity,
    lift_through_blowup,
    psub_lift,
    sigma_lift,
)
from ordcorners.corners import CornersSpace, chain_space, half_line
from ordcorners.generators import random_map, random_morphism, random_space
from ordcorners.monoid_fan import MonoidVector

from figures import H1, H2, H3, H23, H123
from helpers import random_refinement, unit

CHAIN3 = CornersSpace("X", ["1", "2", "3"], [("X", "1"), ("1", "2"), ("2", "3")], [["1", "2", "3"]])
R = C.initial_refinement(CHAIN3)
FIG = {
    "a": R,
    "b": C.blow_up_face(R, [H1, H2, H3]),
    "c": C.blow_up_face(R, [H2, H3]),
    "d": C.blow_up_face(C.blow_up_face(R, [H1, H2, H3]), [H2, H3]),
}
QUAD = chain_space(["H", "G"], 0)
BLOWN_QUAD = C.blow_up_face(C.initial_refinement(QUAD), [unit("H"), unit("G")])


def test_classify_examples():
    for s in (half_line(), QUAD, CHAIN3):
        assert classify(identity(s)) == classify(identity(s)).__class__(True, True, True, True)
    c = classify(BMap(half_line(), half_line(), {("H", "H"): 2}))
    assert (c.simple, c.b_normal, c.ordered, c.interior_fibered_order) == (False, True, True, True)
    src = chain_space(["H1", "H2"], 0)
    dst = chain_space(["G1", "G2"], 0, interior="Y")
    assert not classify(BMap(src, dst, {("G2", "H1"): 1, ("G1", "H2"): 1})).ordered


def test_corner_rule_and_bad_entries():
    two = CornersSpace("Y", ["A", "B"], [("Y", "A"), ("Y", "B")])
    with pytest.raises(ValueError):
        BMap(QUAD, two, {("A", "H"): 1, ("B", "G"): 1})
    with pytest.raises(ValueError):
        BMap(half_line(), half_line(), {("H", "H"): -1})
    with pytest.raises(ValueError):
        BMap(half_line(), half_line(), {("Q", "H"): 1})


def test_lift_examples():
    f = BMap(half_line(), QUAD, {("H", "H"): 1, ("G", "H"): 1})
    lift = lift_through_blowup(f, BLOWN_QUAD)
    assert lift.exponents() == {("G+H", "H"): 1}
    assert lift_through_blowup(identity(QUAD), BLOWN_QUAD) is None
    unrefined = C.initial_refinement(QUAD)
    assert lift_through_blowup(f, unrefined).exponents() == f.exponents()


def test_blowdown_after_lift_is_f():
    f = BMap(half_line(), QUAD, {("H", "H"): 2, ("G", "H"): 1})
    lift = lift_through_blowup(f, BLOWN_QUAD)
    assert compose(blowdown_map(BLOWN_QUAD), lift) == f


def lift_oracle(f, ry):
    """All exponent matrices into the blow-up that obey the corner rule and
    push down to f, found by exhaustive search."""
    down = blowdown_map(ry)
    P = down.domain
    names = dict(C.face_poset(ry).names)
    inv = {label: v for v, label in names.items()}
    cols = []
    for h in f.domain.hypersurfaces:
        col = f.column(h)
        rays = [p for p in P.hypersurfaces if inv[p].support() <= col.support()]
        top = max((e for _, e in col.items()), default=0)
        cols.append([dict(zip(rays, cs)) for cs in cartesian(range(top + 1), repeat=len(rays))])
    out = []
    for choice in cartesian(*cols):
        exps = {(p, h): e for h, col in zip(f.domain.hypersurfaces, choice) for p, e in col.items() if e}
        try:
            m = BMap(f.domain, P, exps)
        except ValueError:
            continue
        if compose(down, m) == f:
            out.append(m)
    return out


def random_column_map(rng, Z, X):
    """A map whose domain corners all land in one codomain corner, with
    columns of entries 0..2 (usually not b-normal)."""
    facet = sorted(rng.choice(X.facets)) if X.facets else []
    exps = {(g, h): rng.randint(0, 2) for h in Z.hypersurfaces for g in facet}
    return BMap(Z, X, {k: e for k, e in exps.items() if e})


@settings(max_examples=80)
@given(st.integers(0, 10**6))
def test_lift_matches_exhaustive_search(seed):
    rng = random.Random(seed)
    Z = random_space(rng, n=rng.randint(1, 2), interior="Z", prefix="E")
    X = random_space(rng, n=rng.randint(1, 3))
    f = random_column_map(rng, Z, X) if rng.random() < 0.7 else random_map(rng, Z, X)
    if f is None:
        return
    ry = random_refinement(rng, X, steps=3)
    lift = lift_through_blowup(f, ry)
    found = lift_oracle(f, ry)
    assert len(found) <= 1
    if lift is None:
        assert found == []
    else:
        assert found == [lift]
        assert compose(blowdown_map(ry), lift) == f


@pytest.mark.parametrize("fig", ["b", "c", "d"])
@pytest.mark.parametrize("sigma", [H1 - H2, H1 - H3])
def test_figure_sigmas_not_smooth(fig, sigma):
    assert sigma_lift(FIG[fig], sigma).overall is Smoothness.NOT_SMOOTH


@pytest.mark.parametrize("fig,expected", [("a", False), ("b", True), ("c", False), ("d", True)])
def test_figure_psub(fig, expected):
    assert psub_lift(FIG[fig], [H1 - H2, H1 - H3]) is expected


def test_sigma_on_fan_c():
    rep = sigma_lift(FIG["c"], H2 - H3)
    assert rep.overall is Smoothness.MIXED
    assert rep.vanishing == (H2,) and rep.vanishing_inverse == (H3,)


@pytest.mark.parametrize("fig", list(FIG))
def test_single_defining_function(fig):
    rep = sigma_lift(FIG[fig], H1)
    assert rep.overall is Smoothness.TO_ZERO_INF
    assert set(rep.vanishing) == {v for v in FIG[fig].rays() if v["1"] > 0}


def test_sigma_rejects_unknown_labels():
    with pytest.raises(ValueError):
        sigma_lift(FIG["a"], unit("9"))


@given(st.sampled_from(list(FIG)), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_smooth_sigma_lifts_to_p_submanifold(fig, coeffs):
    s = MonoidVector(zip(("1", "2", "3"), coeffs))
    if sigma_lift(FIG[fig], s).overall is not Smoothness.NOT_SMOOTH:
        assert psub_lift(FIG[fig], [s])


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_composition_of_morphisms(seed):
    rng = random.Random(seed)
    A = random_space(rng, max_hyps=3, interior="A", prefix="a")
    B = random_space(rng, max_hyps=3, interior="B", prefix="b")
    Cc = random_space(rng, max_hyps=3, interior="C", prefix="c")
    f, g = random_morphism(rng, A, B), random_morphism(rng, B, Cc)
    try:
        h = compose(g, f)
    except ValueError:
        return
    c = classify(h)
    assert c.simple and c.b_normal and c.ordered
    for x in A.mtot():
        assert h.f_sharp(x) == g.f_sharp(f.f_sharp(x))
