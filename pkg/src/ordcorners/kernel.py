"""Backend selection for the exact integer linear-algebra kernel.

The compiled extension is used when it imports; otherwise the pure-Python
reference runs.  Compiled calls that would overflow int64 are retried in
Python, so results never depend on the backend.
"""

from __future__ import annotations

from fractions import Fraction

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

COMPILED_AVAILABLE = _ckernel is not None
_backend = "compiled" if COMPILED_AVAILABLE else "python"


def backend() -> str:
    return _backend


def use_backend(name: str) -> str:
    """Switch backends; returns the previous one."""
    global _backend
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not COMPILED_AVAILABLE:
        raise RuntimeError("compiled kernel is not built")
    prev, _backend = _backend, name
    return prev


def _call(fname, *args):
    if _backend == "compiled":
        try:
            return getattr(_ckernel, fname)(*args)
        except OverflowError:
            pass
    return getattr(_pykernel, fname)(*args)


def rref(rows, ncols: int):
    return _call("rref", rows, ncols)


def nullspace(rows, ncols: int):
    return _call("nullspace", rows, ncols)


def det(rows) -> int:
    return _call("det", rows)


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def solve(columns, target) -> tuple[Fraction, ...] | None:
    """Unique solution c of sum_i c_i * columns[i] = target, or None.

    The columns must be linearly independent.
    """
    ncols = len(columns) + 1
    n = len(target)
    aug = [[col[r] for col in columns] + [target[r]] for r in range(n)]
    red, pivots = rref(aug, ncols)
    if pivots and pivots[-1] == ncols - 1:
        return None
    if len(pivots) != len(columns):
        raise ValueError("columns are linearly dependent")
    return tuple(Fraction(row[-1], row[p]) for row, p in zip(red, pivots))
