"""Integer points on spheres |x|^2 = n in Z^d: caps, cap counts and pair statistics.

Most quantities are invariant under the signed permutation group of Z^d,
so they are computed on orbit representatives (nonincreasing, nonnegative
vectors) and weighted by orbit size.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .enumeration import coset_histogram, list_short_vectors, representation_numbers
from .errors import BudgetExceeded, PointNotOnSphere
from .forms import ortho_lattice, scaled_identity

PAIR_BUDGET = 10**9


# ---------------------------------------------------------------- points

def orbit_representatives(d: int, n: int) -> list[tuple]:
    """Nonincreasing nonnegative x with |x|^2 = n, in lexicographic order."""
    out = []

    def rec(prefix, rem, cap, left):
        if left == 0:
            if rem == 0:
                out.append(tuple(prefix))
            return
        # remaining coordinates are <= cap, so rem <= left * cap^2
        top = min(cap, math.isqrt(rem))
        for a in range(top, -1, -1):
            if rem - a * a > (left - 1) * a * a:
                break
            rec(prefix + [a], rem - a * a, a, left - 1)

    rec([], n, math.isqrt(n), d)
    return sorted(out)


def orbit_size(x) -> int:
    d = len(x)
    size = math.factorial(d)
    for m in Counter(x).values():
        size //= math.factorial(m)
    return size * 2 ** sum(1 for a in x if a)


def canonical(x) -> tuple:
    return tuple(sorted((abs(a) for a in x), reverse=True))


def _orbit(x):
    pts = set()
    for perm in set(itertools.permutations(x)):
        nz = [i for i, a in enumerate(perm) if a]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            y = list(perm)
            for i, s in zip(nz, signs):
                y[i] *= s
            pts.add(tuple(y))
    return pts


@dataclass(frozen=True)
class SpherePointSet:
    d: int
    n: int
    points: tuple

    def __len__(self):
        return len(self.points)


def sphere_size(d: int, n: int) -> int:
    return sum(orbit_size(x) for x in orbit_representatives(d, n))


def sphere_points(d: int, n: int, budget: int = PAIR_BUDGET) -> SpherePointSet:
    """E_d(n), sorted lexicographically."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    if sphere_size(d, n) > budget:
        raise BudgetExceeded(budget, "sphere points")
    pts = set()
    for x in orbit_representatives(d, n):
        pts |= _orbit(x)
    return SpherePointSet(d, n, tuple(sorted(pts)))


def _points_array(d: int, n: int) -> np.ndarray:
    return np.array(sphere_points(d, n).points, dtype=np.int64).reshape(-1, d)


# ---------------------------------------------------------------- caps

def _check_on_sphere(n, x):
    if sum(a * a for a in x) != n:
        raise PointNotOnSphere(f"|{tuple(x)}|^2 != {n}")


def mu(d: int, n: int, x, Ysq) -> int:
    """#{y in E(n) : 0 < |x - y|^2 <= Y^2}."""
    x = tuple(int(a) for a in x)
    if len(x) != d:
        raise ValueError("dimension mismatch")
    _check_on_sphere(n, x)
    return _mu_many(d, n, [x], Fraction(Ysq))[0]


@lru_cache(maxsize=64)
def _ball(d: int, r2: int) -> np.ndarray:
    vecs = list_short_vectors(scaled_identity(d), r2)
    return np.array(vecs, dtype=np.int64).reshape(-1, d)


def _ball_size(d: int, r2: int) -> int:
    return sum(representation_numbers(scaled_identity(d), r2)) if r2 <= 64 else 10**18


def _mu_many(d: int, n: int, xs, Ysq: Fraction) -> list[int]:
    """mu for each x in xs (all on the sphere)."""
    # |x - y|^2 = 2(n - <x,y>) is even, so only floor(Y^2) even part matters
    m = math.floor(Ysq)
    m -= m % 2
    if m < 2:
        return [0] * len(xs)
    if m >= 4 * n:
        total = sphere_size(d, n)
        return [total - 1] * len(xs)
    X = np.array(xs, dtype=np.int64).reshape(-1, d)
    if _ball_size(d, m) <= 4 * sphere_size(d, n) + 10**5:
        # y = x + delta with |delta|^2 <= m and 2<x,delta> + |delta|^2 = 0
        B = _ball(d, m)
        nb = np.einsum("ij,ij->i", B, B)
        return [int(np.count_nonzero(2 * (B @ x) + nb == 0)) for x in X]
    E = _points_array(d, n)
    lim = n - m // 2
    return [int(np.count_nonzero(E @ x >= lim)) - 1 for x in X]


@dataclass
class CapStats:
    d: int
    n: int
    Ysq: Fraction
    threshold: object
    mu_by_rep: dict = field(repr=False)  # orbit representative -> mu
    weights: dict = field(repr=False)  # orbit representative -> orbit size
    size: int = 0
    mean: Fraction = Fraction(0)
    histogram: dict = field(default_factory=dict)
    threshold_prob: Fraction = Fraction(0)

    def mu_of(self, x) -> int:
        _check_on_sphere(self.n, x)
        return self.mu_by_rep[canonical(x)]


def _exceeds(value: int, threshold) -> bool:
    if isinstance(threshold, (int, Fraction)):
        return value > threshold
    return value > float(threshold)


def cap_stats(d: int, n: int, Ysq, threshold=None) -> CapStats:
    """mu over all of E(n), its mean, histogram and P[mu > threshold] (default log n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Ysq = Fraction(Ysq)
    if threshold is None:
        threshold = math.log(n)
    reps = orbit_representatives(d, n)
    weights = {x: orbit_size(x) for x in reps}
    mus = dict(zip(reps, _mu_many(d, n, reps, Ysq)))
    size = sum(weights.values())
    hist = Counter()
    for x in reps:
        hist[mus[x]] += weights[x]
    over = sum(weights[x] for x in reps if _exceeds(mus[x], threshold))
    mean = Fraction(sum(weights[x] * mus[x] for x in reps), size) if size else Fraction(0)
    return CapStats(
        d, n, Ysq, threshold, mus, weights, size, mean,
        dict(sorted(hist.items())), Fraction(over, size) if size else Fraction(0),
    )


# ---------------------------------------------------------------- pair tables

@dataclass(frozen=True)
class PairTable:
    d: int
    n: int
    size: int
    table: dict  # t -> A_d(n, t), every t in [-n, n]

    def __getitem__(self, t):
        return self.table.get(t, 0)

    def check_invariants(self) -> list[str]:
        errs = []
        if sum(self.table.values()) != self.size * self.size - self.size:
            errs.append("sum of entries != |E|^2 - |E|")
        if self[self.n] != 0:
            errs.append("A(n, n) != 0")
        if self.n >= 1 and self[-self.n] != self.size:
            errs.append("A(n, -n) != |E|")
        if any(v % 2 for v in self.table.values()):
            errs.append("odd entry")
        return errs


def pair_table(d: int, n: int, budget: int = PAIR_BUDGET) -> PairTable:
    """A_d(n, t) for all t by bucketing ordered pairs on <p, q>.

    Pairs (p, q) are grouped by the orbit of p; q runs over all of E(n).
    """
    E = _points_array(d, n)
    size = len(E)
    reps = orbit_representatives(d, n)
    if len(reps) * size > budget:
        raise BudgetExceeded(budget, "pair table")
    table = {t: 0 for t in range(-n, n + 1)}
    for x in reps:
        w = orbit_size(x)
        dots = E @ np.array(x, dtype=np.int64)
        vals, cnt = np.unique(dots, return_counts=True)
        for t, c in zip(vals.tolist(), cnt.tolist()):
            table[t] += w * c
    if n >= 0 and size:
        table[n] -= size  # drop p = q
    return PairTable(d, n, size, table)


def _solve_mod2(basis, v):
    """y in F_2^m with sum y_i basis_i = v (mod 2), or None."""
    m = len(basis)
    d = len(v)
    rows = [[basis[i][j] % 2 for i in range(m)] + [v[j] % 2] for j in range(d)]
    piv = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, d) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(d):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(rows[i][m] for i in range(r, d)):
        return None
    y = [0] * m
    for i, c in enumerate(piv):
        y[c] = rows[i][m]
    return y


class OrthoPairCounter:
    """A_d(n, t) through the lattices L_v = Z^d cap v^perp.

    Ordered pairs (p, q) with <p,q> = t correspond to v = p - q in E(2(n - t))
    and w = p + q in L_v with |w|^2 = 2(n + t) and w = v (mod 2).
    Coset histograms are cached per v, so sweeping n reuses them.
    """

    def __init__(self, d: int, budget: int = PAIR_BUDGET):
        self.d = d
        self.budget = budget
        self._cache = {}

    def _hist(self, v, X):
        hit = self._cache.get(v)
        if hit is not None:
            if hit[0] >= X or hit[2] is None:
                return hit[1]
            X = max(X, 2 * hit[0])  # geometric growth keeps a sweep over n linear
            L, y0 = hit[2]
        else:
            L = ortho_lattice(v)
            y0 = _solve_mod2(L.basis, v)
            if y0 is None:
                self._cache[v] = (X, None, None)
                return None
        h = coset_histogram(L.gram, X, y0, q=2, budget=self.budget)
        self._cache[v] = (X, h, (L, y0))
        return h

    def count(self, n: int, t: int, X: int | None = None) -> int:
        if not -n <= t < n:
            raise ValueError("need -n <= t < n")
        s = n - t
        target = 2 * (n + t)
        X = max(target, X or 0)
        total = 0
        for v in orbit_representatives(self.d, 2 * s):
            h = self._hist(v, X)
            if h is not None and target < len(h):
                total += orbit_size(v) * h[target]
        return total


def pair_count_via_ortho(d: int, n: int, t: int, counter: OrthoPairCounter | None = None) -> int:
    return (counter or OrthoPairCounter(d)).count(n, t)


def pair_table_via_ortho(d: int, n: int, counter: OrthoPairCounter | None = None) -> PairTable:
    c = counter or OrthoPairCounter(d)
    table = {t: c.count(n, t) for t in range(-n, n)}
    table[n] = 0
    return PairTable(d, n, sphere_size(d, n), table)


# ---------------------------------------------------------------- identities and regimes

def mean_mu_identity(d: int, n: int, Ysq, table: PairTable | None = None) -> tuple[Fraction, Fraction]:
    """(<mu>, sum_{n - Y^2/2 <= t < n} A(n,t) / |E(n)|), computed independently."""
    Ysq = Fraction(Ysq)
    lhs = cap_stats(d, n, Ysq, threshold=0).mean
    table = table or pair_table(d, n)
    size = table.size
    acc = sum(a for t, a in table.table.items() if t < n and 2 * t >= 2 * n - Ysq)
    return lhs, Fraction(acc, size) if size else Fraction(0)


def even_floor_of_power(n: int, exponent: float) -> int:
    """Largest even integer m with m <= n^exponent (so caps with Y^2 = n^exponent match Y^2 = m)."""
    with mpmath.workprec(200):
        v = mpmath.power(n, mpmath.mpf(exponent))
        m = int(mpmath.floor(v))
        if abs(v - mpmath.nint(v)) < mpmath.mpf(2) ** -120 and float(v) != 0:
            raise ValueError("cap radius too close to an integer to decide")
    return m - (m % 2)


@dataclass(frozen=True)
class CoveringReport:
    d: int
    n: int
    Ysq: Fraction
    threshold: float
    size: int
    probability: Fraction
    mean: Fraction

    @property
    def majority(self) -> bool:
        return self.probability > Fraction(1, 2)


def covering_check(d: int, n: int, Ysq, threshold=None) -> CoveringReport:
    """P[mu(.; n, Y) > threshold] over E(n); threshold defaults to log n (natural)."""
    if threshold is None:
        threshold = math.log(n)
    st = cap_stats(d, n, Ysq, threshold)
    return CoveringReport(d, n, Fraction(Ysq), threshold, st.size, st.threshold_prob, st.mean)
