"""Pure-Python exact integer linear algebra.

Reference implementation of the kernel interface.  Rows are sequences of
Python ints; results are canonical, so the compiled kernel must agree with
these functions bit for bit.
"""

from __future__ import annotations

from math import gcd


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
    if g > 1:
        row = [x // g for x in row]
    return row


def rref(rows, ncols: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form with each row scaled to primitive integers.

    Pivots are positive.  The result is unique for a given row space.
    """
    m = [list(r) for r in rows if any(r)]
    for r in m:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)} in a {ncols}-column matrix")
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top >= len(m):
            break
        piv = None
        for i in range(top, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[top], m[piv] = m[piv], m[top]
        prow = m[top]
        if prow[col] < 0:
            prow = [-x for x in prow]
        prow = _primitive(prow)
        m[top] = prow
        p = prow[col]
        for i in range(len(m)):
            if i == top:
                continue
            c = m[i][col]
            if c:
                m[i] = _primitive([p * a - c * b for a, b in zip(m[i], prow)])
        pivots.append(col)
        top += 1
    out = []
    for r, col in zip(m[:top], pivots):
        if r[col] < 0:
            r = [-x for x in r]
        out.append(tuple(_primitive(r)))
    return tuple(out), tuple(pivots)


def nullspace(rows, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical basis (in rref form) of {x : r.x = 0 for every row r}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        # x_f = L, x_p = -r[f] * L / r[p] with L the lcm of the pivots
        lcm = 1
        for r, p in zip(red, pivots):
            if r[f]:
                lcm = lcm * r[p] // gcd(lcm, r[p])
        vec = [0] * ncols
        vec[f] = lcm
        for r, p in zip(red, pivots):
            if r[f]:
                vec[p] = -r[f] * (lcm // r[p])
        basis.append(vec)
    return rref(basis, ncols)[0]


def det(rows) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    for r in m:
        if len(r) != n:
            raise ValueError("det needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
