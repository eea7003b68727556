"""Exact feasibility of rational linear systems by Fourier-Motzkin elimination."""

from __future__ import annotations

from fractions import Fraction


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction):
    """Scale a constraint so that equal half-spaces compare equal."""
    scale = max((abs(c) for c in coeffs if c), default=None)
    if scale is None:
        return coeffs, rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def feasible(eqs, ineqs, nvars: int) -> bool:
    """Decide whether some rational x satisfies all constraints.

    ``eqs`` holds pairs (a, b) meaning a.x == b and ``ineqs`` pairs meaning
    a.x <= b.  Equalities are substituted away first, then the remaining
    variables are eliminated one at a time.
    """
    eqs = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in eqs]
    les = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in ineqs]
    for a, _ in eqs + les:
        if len(a) != nvars:
            raise ValueError("constraint width does not match the variable count")

    while eqs:
        a, b = eqs.pop()
        j = next((i for i, c in enumerate(a) if c), None)
        if j is None:
            if b != 0:
                return False
            continue
        # x_j = (b - sum_{i != j} a_i x_i) / a_j
        piv = a[j]

        def subst(row, rhs):
            f = row[j] / piv
            if not f:
                return row, rhs
            new = tuple(r - f * s for r, s in zip(row, a))
            return new, rhs - f * b

        eqs = [subst(r, s) for r, s in eqs]
        les = [subst(r, s) for r, s in les]

    rows = {_normalize(a, b) for a, b in les}
    for j in range(nvars):
        pos, neg, rest = [], [], []
        for a, b in rows:
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                rest.append((a, b))
        new = set(rest)
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[j], -an[j]
                comb = tuple(cn * x + cp * y for x, y in zip(ap, an))
                new.add(_normalize(comb, cn * bp + cp * bn))
        rows = new
        for a, b in rows:
            if not any(a) and b < 0:
                return False
    return all(b >= 0 for a, b in rows if not any(a))


def has_nonzero_nonnegative_solution(matrix, n: int) -> bool:
    """True iff A.x = 0 has a solution with x >= 0 and x != 0.

    ``matrix`` is a list of rows of width ``n``.
    """
    rows = [list(r) for r in matrix]
    if n == 0:
        return False
    eqs = [(r, 0) for r in rows]
    eqs.append(([1] * n, 1))
    ineqs = []
    for i in range(n):
        e = [0] * n
        e[i] = -1
        ineqs.append((e, 0))
    return feasible(eqs, ineqs, n)

