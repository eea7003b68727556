"""Hypersurface labels.

Plain strings name hypersurfaces of input spaces.  Product constructions
name their hypersurfaces by pairs.  All ordering goes through
``label_key`` so that mixed label kinds still sort deterministically.
"""

from __future__ import annotations

from typing import Hashable, NamedTuple, Union


class PairLabel(NamedTuple):
    """A hypersurface of a product, named by one element from each factor."""

    left: Hashable
    right: Hashable

    def __str__(self) -> str:
        return f"({label_str(self.left)},{label_str(self.right)})"


Label = Union[str, PairLabel]


def label_str(label) -> str:
    return str(label)


def label_key(label) -> str:
    return label_str(label)


def sort_labels(labels) -> tuple:
    return tuple(sorted(labels, key=label_key))


def fresh_label(taken, stem: str) -> str:
    """``stem`` or the first primed variant not already in ``taken``."""
    names = {label_str(x) for x in taken}
    cand = stem
    while cand in names:
        cand += "'"
    return cand
