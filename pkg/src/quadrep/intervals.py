"""Closed real intervals with exact rational endpoints.

Every operation rounds outward (or not at all), so an interval always
contains the true value it encloses.  Endpoints are ``fractions.Fraction``;
:meth:`Interval.rounded` trims them to dyadic rationals of bounded size so
long products stay cheap.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

DEFAULT_BITS = 200


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def rel_width(self) -> float:
        m = max(abs(self.lo), abs(self.hi))
        return float(self.width / m) if m else 0.0

    def rounded(self, bits: int = DEFAULT_BITS) -> "Interval":
        """Outward-round to dyadic endpoints keeping ``bits`` bits below the leading one."""
        m = max(abs(self.lo), abs(self.hi))
        if m == 0:
            return self
        shift = bits - (m.numerator.bit_length() - m.denominator.bit_length())
        if shift <= 0:
            return Interval(math.floor(self.lo), math.ceil(self.hi))
        return Interval(_floor_dyadic(self.lo, shift), _ceil_dyadic(self.hi, shift))

    def _coerce(self, other) -> "Interval":
        return other if isinstance(other, Interval) else Interval(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by an interval containing 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers")
        if e == 0:
            return Interval(1)
        if self.lo >= 0:
            return Interval(self.lo ** e, self.hi ** e)
        if self.hi <= 0:
            a, b = (-self.hi) ** e, (-self.lo) ** e
            return Interval(a, b) if e % 2 == 0 else Interval(-b, -a)
        m = max(-self.lo, self.hi) ** e
        return Interval(0, m) if e % 2 == 0 else Interval(self.lo ** e, self.hi ** e)

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))


def sqrt_interval(x, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of sqrt(x) for a rational or interval x >= 0."""
    if isinstance(x, Interval):
        return Interval(sqrt_interval(x.lo, bits).lo, sqrt_interval(x.hi, bits).hi)
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative number")
    if x == 0:
        return Interval(0)
    # sqrt(p/q) = sqrt(p*q)/q; scale by 4**bits before isqrt
    p, q = x.numerator, x.denominator
    s = 1 << bits
    r = math.isqrt(p * q * s * s)
    lo = Fraction(r, q * s)
    hi = lo if r * r == p * q * s * s else Fraction(r + 1, q * s)
    return Interval(lo, hi)


def _arctan_inv(x: int, bits: int) -> Interval:
    """Enclosure of arctan(1/x), x >= 2, from the alternating Taylor series."""
    eps = Fraction(1, 1 << (bits + 4))
    total = Fraction(0)
    j = 0
    while True:
        term = Fraction(1, (2 * j + 1) * x ** (2 * j + 1))
        if term < eps:
            # alternating decreasing series: the next partial sum brackets the limit
            nxt = total + term if j % 2 == 0 else total - term
            return Interval(min(total, nxt), max(total, nxt))
        total += term if j % 2 == 0 else -term
        j += 1


@lru_cache(maxsize=None)
def pi_interval(bits: int = DEFAULT_BITS) -> Interval:
    """Rigorous enclosure of pi via Machin's formula."""
    return (16 * _arctan_inv(5, bits) - 4 * _arctan_inv(239, bits)).rounded(bits)


def power_interval(base, num: int, den: int, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of base**(num/den) for rational base > 0 and den in {1, 2}."""
    base = Fraction(base)
    if den == 1:
        return Interval(base ** num) if num >= 0 else Interval(1 / base ** (-num))
    if den != 2:
        raise ValueError("only integer and half-integer exponents")
    if num >= 0:
        return sqrt_interval(base ** num, bits)
    return 1 / sqrt_interval(base ** (-num), bits)


def float_power_interval(base, exponent: float, bits: int = 60) -> Interval:
    """Enclosure of base**exponent for a real exponent given as a float.

    Used for the n**eps style factors of bound reports, where a 60-bit
    enclosure around the correctly-rounded mpmath value is plenty.
    """
    import mpmath

    with mpmath.workprec(bits + 40):
        b = Fraction(base)
        v = mpmath.power(mpmath.mpf(b.numerator) / b.denominator, mpmath.mpf(exponent))
        man, exp = mpmath.mpf(v).man_exp
        f = Fraction(int(man)) * (Fraction(2) ** int(exp))
    pad = abs(f) / (1 << bits) + Fraction(1, 1 << (bits + 200))
    return Interval(f - pad, f + pad)


def fmt_endpoint(x: Fraction, direction: str, digits: int = 15) -> str:
    """Decimal string of x rounded outward ('down' or 'up') to ``digits`` significant digits."""
    if x == 0:
        return "0"
    neg = x < 0
    a = -x if neg else x
    e = math.floor(math.log10(a.numerator) - math.log10(a.denominator))
    # guard against log10 misjudging by one
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    scale = Fraction(10) ** (digits - 1 - e)
    up = (direction == "up") != neg
    m = math.ceil(a * scale) if up else math.floor(a * scale)
    s = _sci(m, e - digits + 1)
    return "-" + s if neg else s


def _sci(m: int, exp: int) -> str:
    ds = str(m)
    exp += len(ds) - 1
    mant = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
    return f"{mant}e{exp:+d}"
