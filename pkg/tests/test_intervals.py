from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from quadrep.intervals import Interval, float_power_interval, fmt_endpoint, pi_interval, power_interval, sqrt_interval

fr = st.fractions(min_value=-100, max_value=100, max_denominator=50)


def test_pi_enclosure():
    iv = pi_interval(200)
    with mpmath.workprec(300):
        p = mpmath.pi
        assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= p <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
    assert iv.width < Fraction(1, 2**190)


@pytest.mark.parametrize("x", [2, 3, Fraction(1, 7), 10**12 + 39])
def test_sqrt_encloses(x):
    iv = sqrt_interval(x)
    assert iv.lo**2 <= x <= iv.hi**2


def test_power_half_integer():
    iv = power_interval(5, 3, 2)  # 5^(3/2)
    assert iv.lo**2 <= 125 <= iv.hi**2


def test_float_power_brackets_mpmath():
    iv = float_power_interval(7, 0.35)
    v = mpmath.power(7, mpmath.mpf(0.35))
    assert float(iv.lo) <= v <= float(iv.hi)


@given(fr, fr, fr, fr)
def test_arithmetic_contains_pointwise(a, b, c, d):
    x = Interval(min(a, b), max(a, b))
    y = Interval(min(c, d), max(c, d))
    for u in (x.lo, x.hi, x.mid):
        for v in (y.lo, y.hi, y.mid):
            assert (x + y).contains(u + v)
            assert (x - y).contains(u - v)
            assert (x * y).contains(u * v)
            if not y.contains(0):
                assert (x / y).contains(u / v)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(2, 1)


@given(st.fractions(min_value=Fraction(1, 10**9), max_value=10**9))
def test_fmt_endpoint_directed(x):
    assert Fraction(fmt_endpoint(x, "down")) <= x <= Fraction(fmt_endpoint(x, "up"))


def test_rounded_is_outward():
    iv = Interval(Fraction(1, 3), Fraction(2, 3)).rounded(20)
    assert iv.lo <= Fraction(1, 3) and iv.hi >= Fraction(2, 3)
