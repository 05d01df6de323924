"""Pure-Python enumeration kernels (reference backend).

Both kernels walk the integer points x with x^T G x <= X using the
fraction-free LDL^T pruning data produced by ``enumeration.prepare``:

* ``minors[i]``   leading principal minor of order i (minors[0] = 1),
* ``coef[i][j]``  integer m_{i+1} * L_{j,i} for j > i.

At level i the admissible x_i satisfy |m_{i+1} x_i + b_i| <= isqrt(Delta_i)
with Delta_i = m_i (m_{i+1} X - W_{i+1}); every quantity is a Python int,
so pruning never loses a boundary point.  The outermost coordinate is fixed
by the caller (``xo``) so work can be split across workers.
"""
from math import isqrt


def _first_at_least(lo, r, q):
    # smallest x >= lo with x = r (mod q)
    return lo + ((r - lo) % q)


def count_exact(coef, minors, k, X, xo, res, q, budget):
    """Number of x with x_{k-1} = xo and x^T G x == X; returns (count, nodes)."""
    state = [0, 0]  # count, nodes
    x = [0] * k
    x[k - 1] = xo

    def level(i, w_next):
        # w_next = W_{i+1}
        b = 0
        row = coef[i]
        for j in range(i + 1, k):
            b += row[j] * x[j]
        a = minors[i + 1]
        delta = minors[i] * (a * X - w_next)
        if delta < 0:
            return
        s = isqrt(delta)
        if i == 0:
            state[1] += 1
            if s * s != delta:
                return
            for t in ((s, -s) if s else (0,)):
                num = t - b
                if num % a == 0:
                    xv = num // a
                    if (xv - res[0]) % q == 0:
                        state[0] += 1
            return
        lo = -((s + b) // a)  # ceil((-s - b)/a)
        hi = (s - b) // a
        xv = _first_at_least(lo, res[i], q)
        mi = minors[i]
        while xv <= hi:
            state[1] += 1
            if state[1] > budget:
                raise _Budget
            t = a * xv + b
            x[i] = xv
            level(i - 1, (t * t + mi * w_next) // a)
            xv += q

    try:
        _outer(level, coef, minors, k, X, xo, x)
    except _Budget:
        return -1, state[1]
    return state[0], state[1]


def histogram(coef, minors, k, X, xo, res, q, budget, hist):
    """Add to ``hist[v]`` the number of x with x_{k-1} = xo and x^T G x == v <= X.

    Returns the node count, or -1 if the budget was exhausted.
    """
    nodes = [0]
    x = [0] * k
    x[k - 1] = xo

    def level(i, w_next):
        b = 0
        row = coef[i]
        for j in range(i + 1, k):
            b += row[j] * x[j]
        a = minors[i + 1]
        delta = minors[i] * (a * X - w_next)
        if delta < 0:
            return
        s = isqrt(delta)
        lo = -((s + b) // a)
        hi = (s - b) // a
        xv = _first_at_least(lo, res[i], q)
        mi = minors[i]
        while xv <= hi:
            nodes[0] += 1
            if nodes[0] > budget:
                raise _Budget
            t = a * xv + b
            w = (t * t + mi * w_next) // a
            if i == 0:
                hist[w] += 1
            else:
                x[i] = xv
                level(i - 1, w)
            xv += q

    try:
        _outer(level, coef, minors, k, X, xo, x, hist)
    except _Budget:
        return -1
    return nodes[0]


class _Budget(Exception):
    pass


def _outer(level, coef, minors, k, X, xo, x, hist=None):
    # the outermost coordinate is fixed; fold it into W_{k-1} directly
    a = minors[k]
    t = a * xo
    delta = minors[k - 1] * (a * X)
    if t * t > delta:
        return
    w = (t * t) // a
    if k == 1:
        if hist is not None:
            hist[w] += 1
        else:
            raise AssertionError("k == 1 handled by caller")
        return
    level(k - 2, w)
