"""Local densities of a positive definite form and the main term rho(n, Q).

sigma_p is the stable value of N_t / p^{t(k-1)}, N_t = #{x mod p^t : Q(x) = n}.
Two independent routes are provided:

* direct counting (``local_count``) by Hensel lifting, exact at every t;
* the Gauss-sum factorisation of S(p^t) over a Jordan splitting, exact for
  odd p and, through Z[zeta_8] arithmetic, for p = 2 as well.

``sigma_p`` uses the formula for odd p and direct counting for p = 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, prod

import numpy as np
from gmpy2 import jacobi
from sympy import factorint, primerange

from .errors import BudgetExceeded, CutoffTooSmall, PrecisionTooLow, StabilizationFailure
from .forms import QuadraticForm
from .gauss import ramanujan_sum
from .intervals import DEFAULT_BITS, Interval, pi_interval, power_interval, sqrt_interval

LOCAL_BUDGET = 10**7
_BRUTE_LIMIT = 5000


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_frac(x: Fraction, p: int) -> int:
    return vp(x.numerator, p) - vp(x.denominator, p)


def stabilization_level(form: QuadraticForm, n: int, p: int) -> int:
    return vp(4 * n * form.discriminant, p) + 2


# ---------------------------------------------------------------- direct count

class _Counter:
    """N(c, m, t) = #{y mod p^t : y^T A y / 2 + c^T y = m (mod p^t)}."""

    def __init__(self, gram, p: int, budget: int):
        self.A = [list(r) for r in gram]
        self.k = len(gram)
        self.p = p
        self.budget = budget
        self.work = 0
        self.memo = {}
        k = self.k
        self.Ap = [[x % p for x in r] for r in self.A]
        self._kernel_basis, self._rank = _nullspace_mod_p(self.Ap, p)
        self._diag = None
        if p != 2 and p**k > _BRUTE_LIMIT:
            self._diag = _diagonalize_mod_p(self.A, p)
        elif p**k <= 10**6:
            grid = np.array(np.meshgrid(*([np.arange(p)] * k), indexing="ij")).reshape(k, -1).T
            self._grid = grid
            self._quad = (np.einsum("ij,jk,ik->i", grid, np.array(self.A, dtype=np.int64), grid) // 2) % p
        else:  # pragma: no cover - p = 2 always lands above
            raise BudgetExceeded(budget, "local count")

    def _value(self, y, c):
        k = self.k
        A = self.A
        s = 0
        for i in range(k):
            s += A[i][i] * y[i] * y[i]
            for j in range(i + 1, k):
                s += 2 * A[i][j] * y[i] * y[j]
        return s // 2 + sum(ci * yi for ci, yi in zip(c, y))

    def _n1(self, c, m):
        p = self.p
        self.work += 1
        if self._diag is None:
            vals = (self._quad + self._grid @ np.array([x % p for x in c], dtype=np.int64)) % p
            return int(np.count_nonzero(vals == m % p))
        d, T = self._diag
        # P(T^T u) = sum d_i u_i^2 + (T c)_i u_i
        tc = [sum(T[i][j] * c[j] for j in range(self.k)) % p for i in range(self.k)]
        u = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=object)
        acc[0] = 1
        for i in range(self.k):
            h = np.bincount((d[i] * u * u + tc[i] * u) % p, minlength=p).astype(object)
            acc = np.array([sum(acc[a] * h[(v - a) % p] for a in range(p)) for v in range(p)], dtype=object)
        return int(acc[m % p])

    def _singular(self, c):
        """All y mod p with A y + c = 0 (mod p)."""
        p = self.p
        y0 = _solve_mod_p(self.Ap, [(-x) % p for x in c], p)
        if y0 is None:
            return []
        out = []
        basis = self._kernel_basis
        r = len(basis)
        for idx in range(p**r):
            y = list(y0)
            j = idx
            for b in basis:
                coef = j % p
                j //= p
                if coef:
                    y = [(a + coef * bb) % p for a, bb in zip(y, b)]
            out.append(tuple(y))
        return out

    def count(self, c, m, t):
        if t == 0:
            return 1
        p = self.p
        q = p**t
        key = (tuple(x % q for x in c), m % q, t)
        if key in self.memo:
            return self.memo[key]
        c, m = list(key[0]), key[1]
        self.work += 1
        if self.work > self.budget:
            raise BudgetExceeded(self.budget, "local count")
        k = self.k
        n1 = self._n1(c, m)
        sing_total = 0
        lifted = 0
        for y0 in self._singular(c):
            v = self._value(y0, c)
            if (v - m) % p:
                continue
            sing_total += 1
            if t == 1:
                lifted += 1
            elif (v - m) % (p * p) == 0:
                g = [(sum(self.A[i][j] * y0[j] for j in range(k)) + c[i]) // p for i in range(k)]
                lifted += p**k * self.count(g, (m - v) // (p * p), t - 2)
        res = (n1 - sing_total) * p ** ((t - 1) * (k - 1)) + lifted
        self.memo[key] = res
        return res


def _inv_mod(a, p):
    return pow(a, -1, p)


def _rref_mod_p(M, p):
    a = [list(r) for r in M]
    rows, cols = len(a), len(a[0]) if a else 0
    piv = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] % p), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = _inv_mod(a[r][c], p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return a, piv


def _nullspace_mod_p(M, p):
    k = len(M)
    a, piv = _rref_mod_p(M, p)
    free = [c for c in range(k) if c not in piv]
    basis = []
    for f in free:
        v = [0] * k
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-a[i][f]) % p
        basis.append(v)
    return basis, len(piv)


def _solve_mod_p(M, b, p):
    k = len(M)
    aug = [list(M[i]) + [b[i]] for i in range(k)]
    a, piv = _rref_mod_p(aug, p)
    if k in piv:
        return None
    y = [0] * k
    for i, c in enumerate(piv):
        y[c] = a[i][k] % p
    return y


def _diagonalize_mod_p(A, p):
    """(d, T) with T (A/2) T^T = diag(d) over F_p, p odd."""
    k = len(A)
    h = _inv_mod(2, p)
    M = [[(x * h) % p for x in r] for r in A]
    T = [[int(i == j) for j in range(k)] for i in range(k)]

    def rowop(i, j, f):  # row_i += f row_j, col_i += f col_j
        M[i] = [(x + f * y) % p for x, y in zip(M[i], M[j])]
        for r in M:
            r[i] = (r[i] + f * r[j]) % p
        T[i] = [(x + f * y) % p for x, y in zip(T[i], T[j])]

    def swap(i, j):
        M[i], M[j] = M[j], M[i]
        for r in M:
            r[i], r[j] = r[j], r[i]
        T[i], T[j] = T[j], T[i]

    for s in range(k):
        piv = next((i for i in range(s, k) if M[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(s, k) for j in range(i + 1, k) if M[i][j]), None)
            if pair is None:
                break
            rowop(pair[0], pair[1], 1)
            piv = pair[0]
        swap(s, piv)
        inv = _inv_mod(M[s][s], p)
        for i in range(s + 1, k):
            if M[i][s]:
                rowop(i, s, (-M[i][s] * inv) % p)
    return [M[i][i] for i in range(k)], T


@lru_cache(maxsize=256)
def _counter(gram, p, budget):
    return _Counter(gram, p, budget)


def local_count(form: QuadraticForm, n: int, p: int, t: int, budget: int = LOCAL_BUDGET) -> int:
    """N_t = #{x mod p^t : Q(x) = n (mod p^t)}, exact."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 1
    c = _counter(form.gram, p, budget)
    c.work = 0
    return c.count((0,) * form.dim, n, t)


def local_count_scan(form: QuadraticForm, n: int, p: int, t: int) -> int:
    """N_t by scanning every residue vector (oracle for small p^{tk})."""
    q = p**t
    k = form.dim
    if q**k > 5 * 10**6:
        raise BudgetExceeded(5 * 10**6, "local scan")
    g = np.array(np.meshgrid(*([np.arange(q)] * k), indexing="ij")).reshape(k, -1).T.astype(np.int64)
    v = np.einsum("ij,jk,ik->i", g, np.array(form.gram, dtype=np.int64), g) // 2
    return int(np.count_nonzero((v - n) % q == 0))


def sigma_p_direct(form: QuadraticForm, n: int, p: int, budget: int = LOCAL_BUDGET) -> Fraction:
    """sigma_p from N_t at three consecutive levels starting at v_p(4nD) + 2."""
    t0 = stabilization_level(form, n, p)
    k = form.dim
    vals = [Fraction(local_count(form, n, p, t, budget), p ** (t * (k - 1))) for t in (t0, t0 + 1, t0 + 2)]
    if len(set(vals)) != 1:
        raise StabilizationFailure(f"p={p} n={n}: {vals}")
    return vals[0]


# ---------------------------------------------------------------- Jordan splittings

@dataclass(frozen=True)
class JordanBlockOdd:
    alpha: int
    unit: int  # modulo p**precision


@dataclass(frozen=True)
class JordanBlock2:
    kind: str  # "q0": x^2, "q1": x y, "q2": x^2 + x y + y^2
    alpha: int
    unit: int = 1  # q0 only, modulo 2**precision

    @property
    def rank(self) -> int:
        return 1 if self.kind == "q0" else 2


def _unit_mod(x: Fraction, p: int, prec: int) -> int:
    q = p**prec
    return (x.numerator * pow(x.denominator, -1, q)) % q


def jordan_decompose(form: QuadraticForm, p: int, precision: int | None = None):
    """Jordan splitting of Q over Z_p.

    Odd p: blocks u p^alpha x^2.  p = 2: blocks u 2^alpha x^2 (q0),
    2^alpha x y (q1) and 2^alpha (x^2 + x y + y^2) (q2); exponents refer to Q
    itself, so 2*I_4 splits as four unit squares.  At each scale an even
    2x2 block is taken before a square when both are available, q1 first.
    """
    if precision is None:
        precision = vp(2 * form.discriminant, p) + 4
    if precision < vp(2 * form.discriminant, p) + 4:
        raise PrecisionTooLow(f"precision {precision} < v_p(2D) + 4")
    # bilinear matrix B = A over Z_(p); Q(x) = x^T B x / 2
    B = [[Fraction(x) for x in r] for r in form.gram]
    idx = list(range(form.dim))
    blocks = []
    while idx:
        vals = {(i, j): _vp_frac(B[i][j], p) for i in idx for j in idx if j >= i and B[i][j] != 0}
        w = min(vals.values())
        if w >= precision + 1:
            raise PrecisionTooLow(f"pivot valuation {w} reaches precision {precision}")
        pair = None
        if p == 2:
            cands = []
            for (i, j), v in sorted(vals.items()):
                if i < j and v == w and all(B[a][a] == 0 or _vp_frac(B[a][a], 2) > w for a in (i, j)):
                    det = (B[i][i] * B[j][j] - B[i][j] ** 2) / Fraction(4) ** w
                    kind = "q1" if _unit_mod(det, 2, 3) == 7 else "q2"
                    cands.append((kind != "q1", i, j, kind))
            if cands:
                _, i, j, kind = min(cands)
                pair = (i, j, kind)
        if pair is None:
            i = next((i for i in idx if (i, i) in vals and vals[(i, i)] == w), None)
            if i is None:
                # odd p: x_i -> x_i + x_j puts valuation w on the diagonal
                i, j = next(ij for ij, v in sorted(vals.items()) if v == w)
                for r in range(len(B)):
                    B[i][r] += B[j][r]
                for r in range(len(B)):
                    B[r][i] += B[r][j]
            if p == 2:
                blocks.append(JordanBlock2("q0", w - 1, _unit_mod(B[i][i] / 2**w, 2, precision)))
            else:
                blocks.append(JordanBlockOdd(w, _unit_mod(B[i][i] / 2 / Fraction(p) ** w, p, precision)))
            piv = [i]
        else:
            i, j, kind = pair
            blocks.append(JordanBlock2(kind, w))
            piv = [i, j]
        rest = [a for a in idx if a not in piv]
        # Schur complement on the remaining indices
        if len(piv) == 1:
            i = piv[0]
            for a in rest:
                f = B[a][i] / B[i][i]
                for b in rest:
                    B[a][b] -= f * B[i][b]
        else:
            i, j = piv
            d = B[i][i] * B[j][j] - B[i][j] ** 2
            inv = [[B[j][j] / d, -B[i][j] / d], [-B[i][j] / d, B[i][i] / d]]
            for a in rest:
                ca = (B[a][i], B[a][j])
                for b in rest:
                    cb = (B[i][b], B[j][b])
                    B[a][b] -= sum(ca[r] * inv[r][s] * cb[s] for r in range(2) for s in range(2))
        idx = rest
    return blocks


# ---------------------------------------------------------------- S(p^t), odd p

def _eps_sq(p: int) -> int:
    # eps_p^2 = (-1/p)
    return 1 if p % 4 == 1 else -1


def S_pt_formula(form: QuadraticForm, n: int, p: int, t: int) -> Fraction:
    """S(p^t) for odd p via Gauss sums over a diagonal Jordan splitting."""
    if p == 2:
        return S_2t_formula(form, n, t)
    if t == 0:
        return Fraction(1)
    blocks = _jordan_cached(form.gram, p)
    k = form.dim
    beta = vp(n, p) if n else 10**9
    E = 0
    chi = 1
    kp = 0
    for b in blocks:
        E += min(b.alpha + t, 2 * t)
        s = t - b.alpha
        if s > 0 and s % 2:
            kp += 1
            chi *= int(jacobi(b.unit, p))
    if kp % 2 == 0:
        inner = ramanujan_sum(n, p, t)
        sign = _eps_sq(p) ** (kp // 2)
        num = sign * chi * inner
        assert E % 2 == 0
        return Fraction(num * p ** (E // 2), p ** (t * k))
    if beta != t - 1:
        return Fraction(0)
    n1 = (n // p ** (t - 1)) % p
    sign = _eps_sq(p) ** ((kp + 1) // 2) * int(jacobi(-n1, p))
    assert (E + 1) % 2 == 0
    return Fraction(sign * chi * p ** (t - 1) * p ** ((E + 1) // 2), p ** (t * k))


@lru_cache(maxsize=8192)
def _jordan_cached(gram, p):
    from .forms import QuadraticForm as _QF

    f = _QF(gram)
    return tuple(jordan_decompose(f, p))


def sigma_p_formula(form: QuadraticForm, n: int, p: int) -> Fraction:
    """Sum of S(p^t) for t <= v_p(n) + 1; S vanishes beyond."""
    top = vp(n, p) + 1
    if p == 2:
        top = max(top, stabilization_level(form, n, 2))
    return sum((S_pt_formula(form, n, p, t) for t in range(top + 1)), Fraction(0))


def sigma_p(form: QuadraticForm, n: int, p: int, method: str = "auto") -> Fraction:
    """Exact local density sigma_p(n, Q).

    method 'auto' uses the Gauss-sum formula for odd p and direct counting for p = 2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "direct" or (method == "auto" and p == 2):
        return sigma_p_direct(form, n, p)
    if method == "auto" and n % p and form.discriminant % p:
        return sigma_p_unramified(form.dim, form.discriminant, n, p)
    return sigma_p_formula(form, n, p)


def sigma_p_unramified(k: int, D: int, n: int, p: int) -> Fraction:
    """1 + S(p) for odd p not dividing nD, where the splitting is all units.

    The product of the units has the class of det(A/2) = D / 2^k, so only
    Legendre symbols are needed.
    """
    chi = int(jacobi(D, p)) * int(jacobi(2, p)) ** (k % 2)
    m1 = _eps_sq(p)
    if k % 2 == 0:
        # c_p(n) = -1
        return 1 - Fraction(m1 ** (k // 2) * chi, p ** (k // 2))
    return 1 + Fraction(m1 ** ((k + 1) // 2) * int(jacobi(-n, p)) * chi, p ** ((k - 1) // 2))


def S_pt_direct(form: QuadraticForm, n: int, p: int, t: int) -> Fraction:
    """S(p^t) = N_t / p^{t(k-1)} - N_{t-1} / p^{(t-1)(k-1)}."""
    if t == 0:
        return Fraction(1)
    k = form.dim
    return Fraction(local_count(form, n, p, t), p ** (t * (k - 1))) - Fraction(
        local_count(form, n, p, t - 1), p ** ((t - 1) * (k - 1))
    )


# ---------------------------------------------------------------- p = 2

class _Z8:
    """Elements of Q(zeta_8) as coefficient 4-tuples over 1, z, z^2, z^3 (z^4 = -1)."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = tuple(Fraction(x) for x in c)

    @staticmethod
    def zeta(j: int) -> "_Z8":
        j %= 8
        c = [0, 0, 0, 0]
        c[j % 4] = -1 if j >= 4 else 1
        return _Z8(c)

    def __add__(self, o):
        return _Z8([a + b for a, b in zip(self.c, o.c)])

    def __mul__(self, o):
        if not isinstance(o, _Z8):
            return _Z8([a * o for a in self.c])
        out = [Fraction(0)] * 4
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        s = i + j
                        if s >= 4:
                            out[s - 4] -= a * b
                        else:
                            out[s] += a * b
        return _Z8(out)


_SQRT2 = _Z8([0, 1, 0, -1])  # z - z^3


def _pow2_half(e: int) -> _Z8:
    """2^{e/2}."""
    r = _Z8([Fraction(2) ** (e // 2), 0, 0, 0])
    return r * _SQRT2 if e % 2 else r


def _block_gauss_2(b: JordanBlock2, a: int, t: int) -> _Z8:
    """sum over the block's variables mod 2^t of e(a * block / 2^t), a odd."""
    s = t - b.alpha
    if b.kind == "q0":
        if s <= 0:
            return _Z8([2**t, 0, 0, 0])
        if s == 1:
            return _Z8([0, 0, 0, 0])
        h = (a * b.unit) % 8
        sign = 1 if s % 2 == 0 or h in (1, 7) else -1
        one_plus = _Z8([1, 0, 0, 0]) + _Z8.zeta(2 * h)  # 1 + i^h
        return one_plus * _pow2_half(s) * (sign * 2**b.alpha)
    if s <= 0:
        return _Z8([4**t, 0, 0, 0])
    if b.kind == "q1":
        return _Z8([2 ** (t + b.alpha), 0, 0, 0])
    return _Z8([4**b.alpha * (-1) ** s * 2**s, 0, 0, 0])


def S_2t_formula(form: QuadraticForm, n: int, t: int) -> Fraction:
    """S(2^t) from block Gauss sums of a 2-adic Jordan splitting, exact."""
    if t == 0:
        return Fraction(1)
    blocks = _jordan_cached(form.gram, 2)
    k = form.dim
    total = _Z8([0, 0, 0, 0])
    if t <= 3:
        for a in range(1, 2**t, 2):
            g = _Z8([1, 0, 0, 0])
            for b in blocks:
                g = g * _block_gauss_2(b, a, t)
            # e(-a n / 2^t) = z^{-a n 8 / 2^t}
            total = total + g * _Z8.zeta(-a * n * (8 >> t))
    else:
        m = 2 ** (t - 3)
        if n % m:
            return Fraction(0)
        nn = n // m
        for r in (1, 3, 5, 7):
            g = _Z8([1, 0, 0, 0])
            for b in blocks:
                g = g * _block_gauss_2(b, r, t)
            total = total + g * _Z8.zeta(-r * nn) * m
    c = total.c
    if c[1] or c[2] or c[3]:
        raise AssertionError(f"non-rational S(2^{t}): {c}")
    return c[0] / Fraction(2) ** (t * k)


def S_2t_bound(form: QuadraticForm, n: int, t: int) -> Fraction:
    """Upper bound for |S(2^t)|^2: (2^{-tk} phi(2^t) prod |block Gauss sum|)^2."""
    if t == 0:
        return Fraction(1)
    blocks = _jordan_cached(form.gram, 2)
    mag2 = Fraction(1)
    for b in blocks:
        s = t - b.alpha
        if s <= 0:
            mag2 *= 4 ** (t * b.rank)
        elif b.kind == "q0":
            mag2 *= 0 if s == 1 else 4**b.alpha * 2 ** (s + 1)
        else:
            mag2 *= _block_gauss_2(b, 1, t).c[0] ** 2
    phi = 2 ** (t - 1)
    return mag2 * phi * phi / Fraction(4) ** (t * form.dim)


# ---------------------------------------------------------------- archimedean and rho

def sigma_infinity(form: QuadraticForm, bits: int = DEFAULT_BITS) -> Interval:
    """(2 pi)^{k/2} / (Gamma(k/2) sqrt(D)), the shell limit of vol{1 < Q < 1 + e} / e."""
    k = form.dim
    D = form.discriminant
    pi = pi_interval(bits)
    if k % 2 == 0:
        h = k // 2
        c = Fraction(2**h, factorial(h - 1))
        return (pi ** h * c / sqrt_interval(Fraction(D), bits)).rounded(bits)
    # Gamma(k/2) = (k-2)!! sqrt(pi) / 2^{(k-1)/2}
    h = (k - 1) // 2
    dfact = prod(range(k - 2, 0, -2)) or 1
    c = Fraction(4**h, dfact)
    return (pi ** h * c * sqrt_interval(Fraction(2, D), bits)).rounded(bits)


def sigma_infinity_sphere_volume(form: QuadraticForm, bits: int = DEFAULT_BITS) -> Interval:
    """vol(S^{k-1}) / sqrt(D), kept for the normalisation comparison."""
    k = form.dim
    D = form.discriminant
    pi = pi_interval(bits)
    # vol(S^{k-1}) = 2 pi^{k/2} / Gamma(k/2)
    if k % 2 == 0:
        h = k // 2
        return (pi ** h * Fraction(2, factorial(h - 1)) / sqrt_interval(Fraction(D), bits)).rounded(bits)
    h = (k - 1) // 2
    dfact = prod(range(k - 2, 0, -2)) or 1
    return (pi ** h * Fraction(2 * 2**h, dfact) / sqrt_interval(Fraction(D), bits)).rounded(bits)


def tail_enclosure(k: int, cutoff: int) -> Interval:
    """Encloses prod over primes p > cutoff of factors within [1 - p^{-(k-1)/2}, 1 + p^{-(k-1)/2}]."""
    if k < 4:
        raise ValueError("tail bound needs k >= 4")
    # sum_{m > c} m^{-(k-1)/2} <= 2 c^{(3-k)/2} / (k-3)
    T = power_interval(cutoff, 3 - k, 2).hi * Fraction(2, k - 3)
    if T >= 1:
        raise ValueError(f"cutoff {cutoff} too small for a tail bound at k={k}")
    return Interval(1 - T, 1 + T + T * T)


@lru_cache(maxsize=8)
def _primes_upto(c: int) -> tuple:
    return tuple(primerange(2, c + 1))


def bad_primes(form: QuadraticForm, n: int) -> list[int]:
    return sorted(factorint(2 * n * form.discriminant))


@dataclass
class DensityProfile:
    n: int
    sigma_infinity: Interval
    finite_densities: dict = field(repr=False)
    tail: Interval
    rho: Interval
    cutoff: int

    def euler_product(self) -> Fraction:
        """Exact product of the stored sigma_p (slow for large cutoffs)."""
        return prod(self.finite_densities.values(), start=Fraction(1))


def density_profile(form: QuadraticForm, n: int, cutoff: int, bits: int = DEFAULT_BITS) -> DensityProfile:
    k = form.dim
    if k < 4:
        raise ValueError("rho needs k >= 4")
    if n < 1:
        raise ValueError("n must be >= 1")
    bad = bad_primes(form, n)
    if bad and bad[-1] > cutoff:
        raise CutoffTooSmall(f"cutoff {cutoff} misses prime {bad[-1]} of 2nD")
    dens = {}
    P = Interval(1)
    chunk = Fraction(1)
    for i, p in enumerate(_primes_upto(cutoff)):
        dens[p] = sigma_p(form, n, p)
        chunk *= dens[p]
        if i % 128 == 127:
            P = (P * chunk).rounded(bits + 64)
            chunk = Fraction(1)
    P = P * chunk
    s_inf = sigma_infinity(form, bits)
    tail = tail_enclosure(k, cutoff)
    npow = power_interval(n, k - 2, 2, bits)
    rho_iv = (npow * s_inf * P * tail).rounded(bits)
    return DensityProfile(n, s_inf, dens, tail, rho_iv, cutoff)


def rho(form: QuadraticForm, n: int, cutoff: int, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of n^{(k-2)/2} sigma_inf prod_p sigma_p."""
    return density_profile(form, n, cutoff, bits).rho
