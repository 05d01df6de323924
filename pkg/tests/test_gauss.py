from math import gcd, sqrt

import pytest
from hypothesis import given, strategies as st

from quadrep.errors import NotCoprime
from quadrep.gauss import gauss_sum, gauss_sum_direct, gauss_sums_direct_all, ramanujan_sum, ramanujan_table


def _cplx(g):
    return complex(g)


@pytest.mark.parametrize(
    "h,m,expected",
    [(1, 3, 1j * sqrt(3)), (2, 3, -1j * sqrt(3)), (5, 1, 1), (1, 4, 2 + 2j), (1, 1, 1)],
)
def test_examples(h, m, expected):
    assert abs(_cplx(gauss_sum(h, m)) - expected) < 1e-12


def test_direct_examples():
    assert abs(complex(gauss_sum_direct(1, 1)) - 1) < 1e-15
    assert abs(complex(gauss_sum_direct(1, 2))) < 1e-15
    assert abs(complex(gauss_sum_direct(1, 4)) - (2 + 2j)) < 1e-15


def test_not_coprime():
    with pytest.raises(NotCoprime):
        gauss_sum(3, 9)


@given(st.integers(1, 400), st.integers(-1000, 1000))
def test_closed_form_matches_literal(m, h):
    if gcd(h, m) != 1:
        return
    assert abs(complex(gauss_sum(h, m)) - complex(gauss_sum_direct(h, m))) < 1e-9


@given(st.integers(0, 300).map(lambda j: 2 * j + 1), st.integers(1, 10**6))
def test_odd_modulus_norm(m, h):
    if gcd(h, m) == 1:
        assert gauss_sum(h, m).abs2() == m


def test_all_h_vectorised_matches_single():
    m = 45
    allv = gauss_sums_direct_all(m)
    for h in range(m):
        assert abs(complex(allv[h]) - complex(gauss_sum_direct(h, m))) < 1e-12


@pytest.mark.parametrize("n,p,t,v", [(3, 3, 2, -3), (9, 3, 2, 6), (1, 3, 2, 0)])
def test_ramanujan_examples(n, p, t, v):
    assert ramanujan_sum(n, p, t) == v


@pytest.mark.parametrize("q,p,t", [(8, 2, 3), (27, 3, 3), (49, 7, 2), (11, 11, 1), (1024, 2, 10)])
def test_ramanujan_against_literal_sum(q, p, t):
    table = ramanujan_table(q)
    assert [ramanujan_sum(n, p, t) for n in range(q)] == table
    # literal definition, straight from e(a n / q) with integer arithmetic on cosines
    from cmath import exp, pi

    for n in range(0, q, max(1, q // 16)):
        s = sum(exp(2j * pi * a * n / q) for a in range(q) if gcd(a, q) == 1)
        assert abs(s - table[n]) < 1e-6


def test_ramanujan_rejects_t0():
    with pytest.raises(ValueError):
        ramanujan_sum(1, 3, 0)
