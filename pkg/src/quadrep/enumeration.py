"""Exact counting and listing of integral representations Q(x) = n.

The search is a Fincke-Pohst style walk over coordinates, pruned with the
exact LDL^T decomposition of the Gram matrix scaled to integers, so the
branch bounds are integer square roots and no boundary point can be lost.

Two kernels implement the walk: a compiled one (``quadrep._kernel``) and
a pure-Python one (``quadrep._kernel_py``).  The compiled kernel is used
when it is importable and the instance fits in 64-bit arithmetic; setting
``QUADREP_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from . import _kernel_py
from .errors import BudgetExceeded
from .forms import QuadraticForm
from .linalg import adjugate, leading_minors

log = logging.getLogger(__name__)

try:
    if os.environ.get("QUADREP_BACKEND", "").lower() == "python":
        raise ImportError("python backend requested")
    from . import _kernel as _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

DEFAULT_BUDGET = 10**9
PROGRESS_EVERY = 10**7
HIST_LIMIT = 10**7  # largest n for which orthogonal summands are combined via dense histograms
_INT64_SAFE = 1 << 62

_state = {"backend": "compiled" if _ckernel is not None else "python"}


def backend() -> str:
    return _state["backend"]


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _ckernel is not None else [])


@contextmanager
def use_backend(name: str):
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available")
    old = _state["backend"]
    _state["backend"] = name
    try:
        yield
    finally:
        _state["backend"] = old


@dataclass(frozen=True)
class Pruning:
    """Integer pruning data for a positive definite integer matrix G."""

    k: int
    minors: tuple
    coef: tuple
    adj_diag: tuple
    det: int

    def coord_bound(self, j: int, X: int) -> int:
        # |x_j| <= sqrt(X * (G^-1)_jj)
        return isqrt(X * self.adj_diag[j] // self.det) + 1


@lru_cache(maxsize=4096)
def prepare(gram: tuple) -> Pruning:
    k = len(gram)
    minors = leading_minors(gram)
    # LDL^T with unit lower L; coef[i][j] = m_{i+1} * L[j][i]
    L = [[Fraction(0)] * k for _ in range(k)]
    Dg = [Fraction(0)] * k
    for j in range(k):
        s = Fraction(gram[j][j]) - sum(L[j][p] ** 2 * Dg[p] for p in range(j))
        Dg[j] = s
        L[j][j] = Fraction(1)
        for i in range(j + 1, k):
            t = Fraction(gram[i][j]) - sum(L[i][p] * L[j][p] * Dg[p] for p in range(j))
            L[i][j] = t / s
    coef = []
    for i in range(k):
        row = []
        for j in range(k):
            if j <= i:
                row.append(0)
            else:
                v = minors[i + 1] * L[j][i]
                assert v.denominator == 1
                row.append(int(v))
        coef.append(tuple(row))
    adj = adjugate(gram)
    return Pruning(k, tuple(minors), tuple(coef), tuple(adj[i][i] for i in range(k)), minors[k])


@lru_cache(maxsize=4096)
def _np_arrays(gram: tuple):
    p = prepare(gram)
    return np.array(p.coef, dtype=np.int64).reshape(p.k, p.k), np.array(p.minors, dtype=np.int64)


def _fits_int64(p: Pruning, X: int) -> bool:
    k = p.k
    xmax = [p.coord_bound(j, X) for j in range(k)]
    for i in range(k):
        if p.minors[i] * p.minors[i + 1] * X >= _INT64_SAFE:
            return False
        b = sum(abs(p.coef[i][j]) * xmax[j] for j in range(i + 1, k))
        if b + p.minors[i + 1] * xmax[i] >= _INT64_SAFE:
            return False
    return True


def _outer_values(p: Pruning, X: int, res0: int, q: int):
    a = p.minors[p.k]
    s = isqrt(p.minors[p.k - 1] * a * X)
    lo = -(s // a)
    hi = s // a
    start = lo + ((res0 - lo) % q)
    return range(start, hi + 1, q)


def _run(gram: tuple, X: int, mode: str, residues=None, q: int = 1,
         budget: int = DEFAULT_BUDGET, threads: int = 1):
    """Drive a kernel over the outermost coordinate.

    mode 'exact' returns #{x : x^T G x == X}; mode 'hist' returns the list
    h[v] = #{x : x^T G x == v} for 0 <= v <= X.  With q > 1 only vectors
    with x = residues (mod q) coordinatewise are visited.
    """
    if X < 0:
        return 0 if mode == "exact" else []
    p = prepare(gram)
    k = p.k
    res = tuple(int(r) % q for r in residues) if residues is not None else (0,) * k
    outer = _outer_values(p, X, res[k - 1], q)
    use_c = backend() == "compiled" and k <= 32 and _fits_int64(p, X)

    if k == 1:
        g = gram[0][0]
        if mode == "exact":
            return sum(1 for x in outer if g * x * x == X)
        h = [0] * (X + 1)
        for x in outer:
            if g * x * x <= X:
                h[g * x * x] += 1
        return h

    if use_c:
        coef, minors = _np_arrays(gram)
        res_arr = np.array(res, dtype=np.int64)
    if mode == "hist":
        return _run_hist(p, X, outer, res, q, budget, threads, (coef, minors, res_arr) if use_c else None)

    if use_c:
        def work(xo, left):
            return _ckernel.count_exact(coef, minors, k, X, xo, res_arr, q, left)
    else:
        def work(xo, left):
            return _kernel_py.count_exact(p.coef, p.minors, k, X, xo, res, q, left)

    total = 0
    nodes = 0
    reported = 0

    def absorb(c, n):
        nonlocal total, nodes, reported
        if n < 0:
            raise BudgetExceeded(budget)
        nodes += n
        if nodes > budget:
            raise BudgetExceeded(budget)
        total += c
        if nodes - reported >= PROGRESS_EVERY:
            reported = nodes
            log.info("enumeration: %d nodes", nodes)

    if threads > 1 and len(outer) > 1:
        # every chunk gets the full budget; the sum is re-checked on aggregation
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for c, n in ex.map(lambda xo: work(xo, budget), outer):
                absorb(c, n)
    else:
        for xo in outer:
            absorb(*work(xo, budget - nodes))
    return total


def _run_hist(p: Pruning, X: int, outer, res, q, budget, threads, compiled):
    """Histogram mode: outer values are dealt round-robin to workers, each owning one buffer."""
    k = p.k
    groups = [outer[i::threads] for i in range(max(1, min(threads, len(outer))))]

    def run_group(xs):
        used = 0
        if compiled is not None:
            coef, minors, res_arr = compiled
            h = np.zeros(X + 1, dtype=np.int64)
            for xo in xs:
                n = _ckernel.histogram(coef, minors, k, X, xo, res_arr, q, budget - used, h)
                if n < 0:
                    raise BudgetExceeded(budget)
                used += n
        else:
            h = [0] * (X + 1)
            for xo in xs:
                n = _kernel_py.histogram(p.coef, p.minors, k, X, xo, res, q, budget - used, h)
                if n < 0:
                    raise BudgetExceeded(budget)
                used += n
        if used > budget:
            raise BudgetExceeded(budget)
        log.debug("enumeration group: %d nodes", used)
        return used, h

    if len(groups) > 1:
        with ThreadPoolExecutor(max_workers=len(groups)) as ex:
            parts = list(ex.map(run_group, groups))
    else:
        parts = [run_group(groups[0])]
    if sum(u for u, _ in parts) > budget:
        raise BudgetExceeded(budget)
    if len(parts) == 1:
        h = parts[0][1]
        return h if isinstance(h, list) else h.tolist()
    total = np.zeros(X + 1, dtype=object)
    for _, h in parts:
        total += np.asarray(h, dtype=object)
    return total.tolist()


# ---------------------------------------------------------------- components

def components(form: QuadraticForm) -> list[list[int]]:
    """Index sets of the orthogonal summands visible in the Gram matrix."""
    k = form.dim
    seen = [False] * k
    comps = []
    for s in range(k):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(k):
                if not seen[j] and form.gram[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _sub_gram(form: QuadraticForm, idx) -> tuple:
    return tuple(tuple(form.gram[i][j] for j in idx) for i in idx)


def _halves(form: QuadraticForm):
    """Split the components into two groups of roughly equal dimension."""
    comps = sorted(components(form), key=lambda c: (-len(c), c))
    left, right = [], []
    for c in comps:
        (left if len(left) <= len(right) else right).extend(c)
    return sorted(left), sorted(right)


def _group_histogram(form, idx, n, budget, threads):
    """r_{Q|idx}(m) for m <= n, where Q|idx is the restriction to coordinates idx."""
    g = _sub_gram(form, idx)
    h2 = _run(g, 2 * n, "hist", budget=budget, threads=threads)
    return h2[0::2]


def count_representations(form: QuadraticForm, n: int, budget: int = DEFAULT_BUDGET,
                          threads: int = 1) -> int:
    """r(Q, n): the number of x in Z^k with Q(x) = n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if n <= HIST_LIMIT and len(components(form)) > 1:
        left, right = _halves(form)
        hl = _group_histogram(form, left, n, budget, threads)
        hr = _group_histogram(form, right, n, budget, threads)
        return sum(hl[m] * hr[n - m] for m in range(n + 1) if hl[m] and hr[n - m])
    return _run(form.gram, 2 * n, "exact", budget=budget, threads=threads)


def representation_numbers(form: QuadraticForm, x: int, budget: int = DEFAULT_BUDGET,
                           threads: int = 1) -> list[int]:
    """[r(Q, 0), ..., r(Q, x)] from a single enumeration of {Q <= x}."""
    if x < 0:
        return []
    if x <= HIST_LIMIT and len(components(form)) > 1:
        left, right = _halves(form)
        hl = _group_histogram(form, left, x, budget, threads)
        hr = _group_histogram(form, right, x, budget, threads)
        out = [0] * (x + 1)
        for a, va in enumerate(hl):
            if va:
                for b in range(x + 1 - a):
                    if hr[b]:
                        out[a + b] += va * hr[b]
        return out
    return _group_histogram(form, list(range(form.dim)), x, budget, threads)


def cumulative_counts(form: QuadraticForm, x: int, budget: int = DEFAULT_BUDGET,
                      threads: int = 1) -> tuple[int, int]:
    """(sum_{n<=x} r(Q,n), sum_{n<=x} r(Q,n)^2)."""
    r = representation_numbers(form, x, budget=budget, threads=threads)
    return sum(r), sum(v * v for v in r)


def coset_histogram(gram, X: int, residues, q: int = 2, budget: int = DEFAULT_BUDGET,
                    threads: int = 1) -> list[int]:
    """h[v] = #{y : y = residues (mod q), y^T G y = v} for v <= X (G need not be even)."""
    g = tuple(tuple(int(v) for v in r) for r in gram)
    return _run(g, X, "hist", residues=residues, q=q, budget=budget, threads=threads)


# ---------------------------------------------------------------- listing

def _walk_list(gram: tuple, X: int, exact: bool, budget: int):
    p = prepare(gram)
    k = p.k
    coef, minors = p.coef, p.minors
    x = [0] * k
    out = []
    nodes = 0

    def level(i, w_next):
        nonlocal nodes
        b = sum(coef[i][j] * x[j] for j in range(i + 1, k))
        a = minors[i + 1]
        delta = minors[i] * (a * X - w_next)
        if delta < 0:
            return
        s = isqrt(delta)
        lo = -((s + b) // a)
        hi = (s - b) // a
        for xv in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(budget)
            t = a * xv + b
            w = (t * t + minors[i] * w_next) // a
            x[i] = xv
            if i == 0:
                if w == X or not exact:
                    out.append(tuple(x))
            else:
                level(i - 1, w)

    level(k - 1, 0)
    return out


def list_representations(form: QuadraticForm, n: int, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """All x with Q(x) = n in lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sorted(_walk_list(form.gram, 2 * n, True, budget))


def list_short_vectors(form: QuadraticForm, bound: int, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """All nonzero x with Q(x) <= bound."""
    zero = (0,) * form.dim
    return [x for x in _walk_list(form.gram, 2 * bound, False, budget) if x != zero]


# ---------------------------------------------------------------- oracle

def naive_box_counts(form: QuadraticForm, n_max: int, chunk: int = 1 << 20) -> list[int]:
    """r(Q, m) for m <= n_max by scanning the full coordinate box.

    Independent of the pruned walk: the box half-widths are
    floor(sqrt(2 n_max (A^-1)_jj)), which contain every x with Q(x) <= n_max.
    """
    k = form.dim
    adj = adjugate(form.gram)
    d = form.discriminant
    bounds = [isqrt(2 * n_max * adj[j][j] // d) for j in range(k)]
    A = np.array(form.gram, dtype=np.int64)
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    sizes = [len(a) for a in axes]
    total = int(np.prod(sizes))
    counts = np.zeros(n_max + 1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        X = np.empty((len(idx), k), dtype=np.int64)
        rem = idx
        for j in range(k - 1, -1, -1):
            X[:, j] = axes[j][rem % sizes[j]]
            rem = rem // sizes[j]
        vals = np.einsum("ij,jk,ik->i", X, A, X) // 2
        vals = vals[vals <= n_max]
        counts += np.bincount(vals, minlength=n_max + 1)[: n_max + 1]
    return [int(c) for c in counts]
