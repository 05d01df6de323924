# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels.

Same traversal and the same integer pruning as ``_kernel_py``; all
arithmetic is in 64-bit integers, which the caller guarantees cannot
overflow (see ``enumeration._fits_int64``).  The GIL is released while
walking so outer-coordinate chunks can run on several threads.
"""
from libc.math cimport sqrtl

ctypedef long long i64

cdef enum:
    MAXK = 32


cdef inline i64 _isqrt(i64 n) noexcept nogil:
    cdef i64 s
    if n <= 0:
        return 0
    s = <i64> sqrtl(<long double> n)
    while s > 0 and s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


cdef inline i64 _floordiv(i64 a, i64 b) noexcept nogil:
    # b > 0
    cdef i64 qq = a / b
    if a % b != 0 and a < 0:
        qq -= 1
    return qq


cdef inline i64 _mod(i64 a, i64 b) noexcept nogil:
    cdef i64 r = a % b
    if r < 0:
        r += b
    return r


cdef i64 _walk(const i64[:, ::1] coef, const i64[::1] minors, int k, i64 X, i64 xo,
               const i64[::1] res, i64 q, i64 budget, int exact,
               i64[::1] hist, i64* count_out) noexcept nogil:
    cdef i64 x[MAXK]
    cdef i64 W[MAXK + 1]
    cdef i64 hi[MAXK]
    cdef i64 bb[MAXK]
    cdef i64 nodes = 0
    cdef i64 a, t, delta, s, lo, w, num, xv, cnt = 0
    cdef int i, j, enter, r
    cdef i64 roots[2]
    cdef int nroots

    a = minors[k]
    t = a * xo
    delta = minors[k - 1] * (a * X)
    count_out[0] = 0
    if t * t > delta:
        return 0
    W[k - 1] = (t * t) / a
    x[k - 1] = xo
    if k == 1:
        return 0
    i = k - 2
    enter = 1
    while True:
        a = minors[i + 1]
        if enter:
            enter = 0
            s = 0
            for j in range(i + 1, k):
                s += coef[i, j] * x[j]
            bb[i] = s
            delta = minors[i] * (a * X - W[i + 1])
            if delta < 0:
                hi[i] = 0
                x[i] = 1  # forces the level to be exhausted below
            else:
                s = _isqrt(delta)
                if i == 0 and exact:
                    nodes += 1
                    if s * s == delta:
                        roots[0] = s
                        roots[1] = -s
                        nroots = 2 if s != 0 else 1
                        for r in range(nroots):
                            num = roots[r] - bb[0]
                            if _mod(num, a) == 0:
                                xv = num / a
                                if _mod(xv - res[0], q) == 0:
                                    cnt += 1
                    hi[i] = 0
                    x[i] = 1
                else:
                    lo = -_floordiv(s + bb[i], a)
                    hi[i] = _floordiv(s - bb[i], a)
                    x[i] = lo + _mod(res[i] - lo, q)
        else:
            x[i] += q
        if x[i] > hi[i]:
            i += 1
            if i > k - 2:
                break
            continue
        nodes += 1
        if nodes > budget:
            count_out[0] = cnt
            return -1
        t = a * x[i] + bb[i]
        w = (t * t + minors[i] * W[i + 1]) / a
        if i == 0:
            hist[w] += 1
        else:
            W[i] = w
            i -= 1
            enter = 1
    count_out[0] = cnt
    return nodes


def count_exact(const i64[:, ::1] coef, const i64[::1] minors, int k, i64 X, i64 xo,
                const i64[::1] res, i64 q, i64 budget):
    cdef i64 cnt = 0
    cdef i64 nodes
    cdef i64[::1] dummy = _DUMMY
    if k > MAXK:
        raise ValueError("dimension too large for the compiled kernel")
    with nogil:
        nodes = _walk(coef, minors, k, X, xo, res, q, budget, 1, dummy, &cnt)
    if nodes < 0:
        return -1, budget + 1
    return cnt, nodes


def histogram(const i64[:, ::1] coef, const i64[::1] minors, int k, i64 X, i64 xo,
              const i64[::1] res, i64 q, i64 budget, i64[::1] hist):
    cdef i64 cnt = 0
    cdef i64 nodes
    if k > MAXK:
        raise ValueError("dimension too large for the compiled kernel")
    if k == 1:
        # single coordinate: the outer value is the whole vector
        if (minors[1] * xo) * xo <= X:
            hist[minors[1] * xo * xo] += 1
        return 1
    with nogil:
        nodes = _walk(coef, minors, k, X, xo, res, q, budget, 0, hist, &cnt)
    return nodes


import numpy as _np
_DUMMY = _np.zeros(1, dtype=_np.int64)
