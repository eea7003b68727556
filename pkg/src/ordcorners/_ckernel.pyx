# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact integer linear algebra on small int64 matrices.

Same interface and canonical output as ``_pykernel``.  Every product is
guarded; when an entry would leave the safe range the function raises
OverflowError and the caller falls back to arbitrary precision.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef int64_t LIMIT = 2147483648  # 2**31: a*b - c*d stays inside int64


cdef inline int64_t _abs(int64_t x) nogil:
    return -x if x < 0 else x


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    a = _abs(a)
    b = _abs(b)
    while b:
        a, b = b, a % b
    return a


cdef inline void _primitive(int64_t* row, int n) nogil:
    cdef int64_t g = 0
    cdef int j
    for j in range(n):
        if row[j]:
            g = _gcd(g, row[j])
    if g > 1:
        for j in range(n):
            row[j] = row[j] // g


cdef int _combine(int64_t* dst, int64_t p, int64_t c, int64_t* src, int n) nogil:
    # dst = p * dst - c * src; returns 1 on overflow risk
    cdef int j
    if _abs(p) >= LIMIT or _abs(c) >= LIMIT:
        return 1
    for j in range(n):
        if _abs(dst[j]) >= LIMIT or _abs(src[j]) >= LIMIT:
            return 1
    for j in range(n):
        dst[j] = p * dst[j] - c * src[j]
    return 0


cdef int64_t* _load(rows, int nrows, int ncols) except NULL:
    cdef int64_t* m = <int64_t*> malloc(max(1, nrows * ncols) * sizeof(int64_t))
    if m == NULL:
        raise MemoryError()
    cdef int i, j
    try:
        for i in range(nrows):
            r = rows[i]
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)} in a {ncols}-column matrix")
            for j in range(ncols):
                x = r[j]
                if x >= LIMIT or x <= -LIMIT:
                    raise OverflowError("entry too large for the compiled kernel")
                m[i * ncols + j] = x
    except BaseException:
        free(m)
        raise
    return m


cdef int _rref_inplace(int64_t* m, int nrows, int ncols, int* pivots, int* rank) nogil:
    cdef int top = 0, col, i, j, piv
    cdef int64_t p, c, tmp
    for col in range(ncols):
        if top >= nrows:
            break
        piv = -1
        for i in range(top, nrows):
            if m[i * ncols + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != top:
            for j in range(ncols):
                tmp = m[top * ncols + j]
                m[top * ncols + j] = m[piv * ncols + j]
                m[piv * ncols + j] = tmp
        if m[top * ncols + col] < 0:
            for j in range(ncols):
                m[top * ncols + j] = -m[top * ncols + j]
        _primitive(&m[top * ncols], ncols)
        p = m[top * ncols + col]
        for i in range(nrows):
            if i == top:
                continue
            c = m[i * ncols + col]
            if c:
                if _combine(&m[i * ncols], p, c, &m[top * ncols], ncols):
                    return 1
                _primitive(&m[i * ncols], ncols)
        pivots[top] = col
        top += 1
    for i in range(top):
        if m[i * ncols + pivots[i]] < 0:
            for j in range(ncols):
                m[i * ncols + j] = -m[i * ncols + j]
        _primitive(&m[i * ncols], ncols)
    rank[0] = top
    return 0


def rref(rows, int ncols):
    rows = [r for r in rows if any(r)]
    cdef int nrows = len(rows)
    cdef int64_t* m = _load(rows, nrows, ncols)
    cdef int* pivots = <int*> malloc(max(1, ncols) * sizeof(int))
    cdef int rank = 0, status, i, j
    try:
        with nogil:
            status = _rref_inplace(m, nrows, ncols, pivots, &rank)
        if status:
            raise OverflowError("intermediate entry too large for the compiled kernel")
        out = tuple(tuple(m[i * ncols + j] for j in range(ncols)) for i in range(rank))
        piv = tuple(pivots[i] for i in range(rank))
        return out, piv
    finally:
        free(m)
        free(pivots)


def nullspace(rows, int ncols):
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    cdef int64_t lcm, rp
    for f in range(ncols):
        if f in pivset:
            continue
        lcm = 1
        for r, p in zip(red, pivots):
            if r[f]:
                rp = r[p]
                lcm = lcm // _gcd(lcm, rp)
                if lcm >= LIMIT or rp >= LIMIT:
                    raise OverflowError("lcm too large for the compiled kernel")
                lcm = lcm * rp
        vec = [0] * ncols
        vec[f] = lcm
        for r, p in zip(red, pivots):
            if r[f]:
                vec[p] = -r[f] * (lcm // r[p])
        basis.append(vec)
    return rref(basis, ncols)[0]


def det(rows):
    cdef int n = len(rows)
    if n == 0:
        return 1
    cdef int64_t* m = _load(rows, n, n)
    cdef int k, i, j, sign = 1
    cdef int64_t prev = 1, tmp, a, b, c, d
    try:
        for k in range(n - 1):
            if m[k * n + k] == 0:
                for i in range(k + 1, n):
                    if m[i * n + k]:
                        for j in range(n):
                            tmp = m[k * n + j]
                            m[k * n + j] = m[i * n + j]
                            m[i * n + j] = tmp
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a = m[i * n + j]
                    b = m[k * n + k]
                    c = m[i * n + k]
                    d = m[k * n + j]
                    if _abs(a) >= LIMIT or _abs(b) >= LIMIT or _abs(c) >= LIMIT or _abs(d) >= LIMIT:
                        raise OverflowError("entry too large for the compiled kernel")
                    m[i * n + j] = (a * b - c * d) // prev
            prev = m[k * n + k]
        return sign * m[(n - 1) * n + (n - 1)]
    finally:
        free(m)
