"""Quadratic Gauss sums and Ramanujan sums, closed forms and literal oracles."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
from gmpy2 import jacobi

from .errors import NotCoprime


@dataclass(frozen=True)
class GaussSumValue:
    """The number (a + b i) * sqrt(m)."""

    a: int
    b: int
    m: int

    @property
    def approx(self) -> complex:
        r = float(self.m) ** 0.5
        return complex(self.a * r, self.b * r)

    def __complex__(self):
        return self.approx

    def abs2(self) -> int:
        return (self.a * self.a + self.b * self.b) * self.m

    def __str__(self):
        return f"({self.a}{self.b:+d}i)*sqrt({self.m})"


def _split2(m: int):
    e = 0
    while m % 2 == 0:
        m //= 2
        e += 1
    return e, m


def _mul_gi(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _i_pow(e: int):
    return ((1, 0), (0, 1), (-1, 0), (0, -1))[e % 4]


def gauss_sum(h: int, m: int) -> GaussSumValue:
    """G(h, m) = sum_{x mod m} e(h x^2 / m) for gcd(h, m) = 1."""
    if m < 1:
        raise ValueError("m must be positive")
    if gcd(h, m) != 1:
        raise NotCoprime(f"gcd({h}, {m}) != 1")
    if m == 1:
        return GaussSumValue(1, 0, 1)
    e, mo = _split2(m)
    z = (1, 0)
    # odd part: eps_m (h 2^e / m) sqrt(m), eps_m = 1 or i
    if mo > 1:
        s = int(jacobi(h * 2**e, mo))
        z = (s, 0) if mo % 4 == 1 else (0, s)
    if e:
        if e == 1:
            return GaussSumValue(0, 0, m)
        # G(h', 2^e) = (2/h')^e (1 + i^h') 2^{e/2}, h' = h * mo
        hh = h * mo
        s = 1 if e % 2 == 0 or hh % 8 in (1, 7) else -1
        w = _i_pow(hh)
        z = _mul_gi(z, (s * (1 + w[0]), s * w[1]))
    return GaussSumValue(z[0], z[1], m)


def gauss_sum_direct(h: int, m: int) -> np.clongdouble:
    """Literal summation of the m roots of unity in extended (64-bit mantissa) precision."""
    if m < 1:
        raise ValueError("m must be positive")
    r = np.array([(h * v * v) % m for v in range(m)], dtype=np.int64)
    cnt = np.bincount(r, minlength=m).astype(np.longdouble)
    ang = _twopi() * np.arange(m, dtype=np.longdouble) / np.longdouble(m)
    re = np.sum(cnt * np.cos(ang))
    im = np.sum(cnt * np.sin(ang))
    return re + np.clongdouble(1j) * im


def gauss_sums_direct_all(m: int) -> np.ndarray:
    """Literal sums G(h, m) for every h in [0, m), same precision as gauss_sum_direct."""
    if m < 1:
        raise ValueError("m must be positive")
    v = np.arange(m, dtype=np.int64)
    cnt = np.bincount((v * v) % m, minlength=m).astype(np.longdouble)
    # G(h) = sum_j cnt[j] e(h j / m)
    ang = _twopi() * v.astype(np.longdouble) / np.longdouble(m)
    c, s = np.cos(ang), np.sin(ang)
    idx = np.outer(v, v) % m
    return c[idx] @ cnt + np.clongdouble(1j) * (s[idx] @ cnt)


def _twopi():
    # 2*pi to long double precision
    return np.longdouble("6.283185307179586476925286766559005768")


def ramanujan_sum(n: int, p: int, t: int) -> int:
    """c_{p^t}(n) for a prime p and t >= 1."""
    if t < 1:
        raise ValueError("t must be >= 1")
    q = p**t
    if n % q == 0:
        return q - q // p
    if n % (q // p) == 0:
        return -(q // p)
    return 0


def ramanujan_table(q: int) -> list[int]:
    """[c_q(0), ..., c_q(q-1)] by a discrete Fourier transform of the unit indicator mod q."""
    units = (np.gcd(np.arange(q), q) == 1).astype(float)
    f = np.fft.fft(units)  # sum_a 1_u(a) e(-a n / q)
    return np.rint(f.real).astype(np.int64).tolist()
