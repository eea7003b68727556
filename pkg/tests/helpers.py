"""Shared builders for randomized tests."""

import random

from ordcorners import corners as C
from ordcorners.monoid_fan import MonoidVector


def random_refinement(rng: random.Random, space, steps: int = 2):
    """A few random corner blow-ups of ``space``."""
    r = C.initial_refinement(space)
    for _ in range(rng.randint(0, steps)):
        cones = sorted(
            {frozenset(c.generators) for fan in r.fans.values() for c in fan.all_cones() if len(c.generators) >= 2},
            key=lambda c: sorted(v.sort_key() for v in c),
        )
        if not cones:
            break
        r = C.blow_up_face(r, rng.choice(cones))
    return r


def unit(label) -> MonoidVector:
    return MonoidVector.unit(label)
