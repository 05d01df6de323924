import itertools
from fractions import Fraction

import mpmath
import pytest

from quadrep.errors import CutoffTooSmall, StabilizationFailure
from quadrep.family import FamilySpec, generate_family, small_discriminant_family
from quadrep.forms import diagonal_form, scaled_identity, validate
from quadrep.local_densities import (
    S_2t_bound,
    S_2t_formula,
    S_pt_direct,
    S_pt_formula,
    density_profile,
    jordan_decompose,
    local_count,
    local_count_scan,
    rho,
    sigma_infinity,
    sigma_infinity_sphere_volume,
    sigma_p,
    sigma_p_direct,
    sigma_p_unramified,
    stabilization_level,
    tail_enclosure,
)


def _family(count=4, seed=21):
    spec = FamilySpec(seed=seed, k_values=(4, 5, 6), count=count, H=2)
    return generate_family(spec)


def test_local_count_examples(i4):
    assert local_count(i4, 1, 3, 1) == 24
    assert local_count(i4, 1, 2, 1) == 8
    assert local_count(i4, 5, 7, 0) == 1


@pytest.mark.parametrize("p,t", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_local_count_matches_scan(p, t):
    for f in _family(3):
        if (p**t) ** f.dim > 5 * 10**6:
            continue
        for n in (0, 1, 2, 3, 6, 12):
            assert local_count(f, n, p, t) == local_count_scan(f, n, p, t)


def test_sigma_examples(i4):
    assert sigma_p(i4, 1, 3) == Fraction(8, 9)
    assert sigma_p_direct(i4, 1, 3) == Fraction(8, 9)
    assert S_pt_formula(i4, 1, 3, 1) == Fraction(-1, 9)
    # value fixed by the counting oracle at three levels
    assert sigma_p(i4, 1, 5) == sigma_p_direct(i4, 1, 5) == Fraction(24, 25)
    assert sigma_p(i4, 1, 2) == 1
    assert S_pt_formula(i4, 7, 3, 0) == 1


def test_unramified_interval(i4):
    for f in [i4] + _family(3):
        k = f.dim
        for p in (3, 5, 7, 11, 13, 17):
            for n in (1, 2, 7, 10):
                if (2 * n * f.discriminant) % p == 0:
                    continue
                s = sigma_p(f, n, p)
                assert s == sigma_p_unramified(k, f.discriminant, n, p) == sigma_p(f, n, p, method="formula")
                # |s - 1| <= p^{-(k-1)/2}, squared to stay exact
                assert (s - 1) ** 2 * p ** (k - 1) <= 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_odd_formula_matches_counts(p):
    for f in _family(4, seed=5):
        for n in (1, 3, 5, 9, 18, 25, 49, 75):
            for t in range(0, 4):
                if (p**t) ** 2 > 10**6 and t > 2:
                    continue
                assert S_pt_formula(f, n, p, t) == S_pt_direct(f, n, p, t), (f.gram, n, p, t)


def test_vanishing_beyond_valuation():
    f = _family(1)[0]
    for n, p in [(3, 3), (9, 3), (5, 5)]:
        beta = 0
        while n % p ** (beta + 1) == 0:
            beta += 1
        if f.discriminant % p == 0:
            continue
        for t in range(beta + 2, beta + 4):
            assert S_pt_formula(f, n, p, t) == 0


def test_two_adic_formula_matches_counts():
    forms = _family(4, seed=8) + [scaled_identity(4), diagonal_form(1, 1, 1, 2), diagonal_form(1, 2, 3, 4)]
    for f in forms:
        for n in (1, 2, 3, 4, 6, 8, 12):
            for t in range(0, 5):
                s = S_2t_formula(f, n, t)
                assert s == S_pt_direct(f, n, 2, t), (f.gram, n, t)
                assert s * s <= S_2t_bound(f, n, t)


def _block_value(b, x, p):
    if p != 2:
        return b.unit * p**b.alpha * x[0] ** 2
    if b.kind == "q0":
        return b.unit * 2**b.alpha * x[0] ** 2
    if b.kind == "q1":
        return 2**b.alpha * x[0] * x[1]
    return 2**b.alpha * (x[0] ** 2 + x[0] * x[1] + x[1] ** 2)


def _value_distribution(f, blocks, p, m):
    """Histogram of Q mod m over x mod m, for the form and for the block sum."""
    k = f.dim
    hf, hb = [0] * m, [0] * m
    for x in itertools.product(range(m), repeat=k):
        hf[f.value(x) % m] += 1
        i, v = 0, 0
        for b in blocks:
            r = 1 if p != 2 or b.kind == "q0" else 2
            v += _block_value(b, x[i:i + r], p)
            i += r
        hb[v % m] += 1
    return hf, hb


def test_jordan_examples(i4):
    blocks = jordan_decompose(i4, 3)
    assert [(b.alpha, b.unit % 3) for b in blocks] == [(0, 1)] * 4
    assert sorted(b.alpha for b in jordan_decompose(diagonal_form(1, 3, 3, 9), 3)) == [0, 1, 1, 2]
    two = jordan_decompose(i4, 2)
    assert sum(b.rank for b in two) == 4


@pytest.mark.parametrize("p,m", [(2, 8), (3, 9), (5, 5)])
def test_jordan_congruence_by_value_counts(p, m):
    forms = [scaled_identity(4), validate([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 4]])]
    forms += [f for _, f in small_discriminant_family(2, 4)[:3]]
    for f in forms:
        blocks = jordan_decompose(f, p)
        assert sum(b.rank if p == 2 else 1 for b in blocks) == f.dim
        hf, hb = _value_distribution(f, blocks, p, m)
        assert hf == hb, (f.gram, blocks)


def test_stabilization_and_failure_type(i4):
    assert stabilization_level(i4, 1, 3) >= 2
    assert issubclass(StabilizationFailure, Exception)


def test_sigma_infinity_examples(i4):
    with mpmath.workdps(80):
        pi2 = Fraction(mpmath.nstr(mpmath.pi**2, 70))
        pi = mpmath.pi
    iv = sigma_infinity(i4)
    slop = Fraction(1, 10**65)
    assert iv.lo - slop <= pi2 <= iv.hi + slop
    iv8 = sigma_infinity(scaled_identity(8))
    assert float(iv8.mid) == pytest.approx(float(pi**4 / 6), rel=1e-14)
    assert iv8.width / iv8.lo < Fraction(1, 10**12)
    for f in _family(3):
        assert sigma_infinity(f).lo > 0


def test_sigma_infinity_odd_rank_matches_shell_volume():
    f = scaled_identity(5)
    # (k/2) vol(B^k) 2^{k/2} / sqrt(D) with vol(B^5) = 8 pi^2 / 15
    k, D = 5, 32
    expected = mpmath.mpf(k) / 2 * 8 * mpmath.pi**2 / 15 * mpmath.sqrt(2) ** k / mpmath.sqrt(D)
    assert float(sigma_infinity(f).mid) == pytest.approx(float(expected), rel=1e-14)


def test_sphere_volume_constant_differs_by_power_of_two():
    for k in (4, 5, 6, 8):
        f = scaled_identity(k)
        ratio = sigma_infinity_sphere_volume(f) / sigma_infinity(f)
        assert float(ratio.mid) == pytest.approx(2 ** (1 - k / 2), rel=1e-12)


def test_tail_enclosure():
    for k in (4, 5, 8):
        iv = tail_enclosure(k, 10**4)
        assert iv.contains(1)
    assert tail_enclosure(5, 10**5).width < tail_enclosure(5, 10**4).width
    with pytest.raises(ValueError):
        tail_enclosure(4, 2)


def test_rho_examples(i4):
    assert rho(scaled_identity(8), 1, 10**4).contains(16)
    assert rho(i4, 1, 10**4).contains(8)
    widths = [rho(i4, 1, c).width for c in (10**2, 10**3, 10**4)]
    assert widths[0] > widths[1] > widths[2]


def test_density_profile_contents(i4):
    prof = density_profile(i4, 6, 100)
    assert set(prof.finite_densities) >= {2, 3}
    assert all(v >= 0 for v in prof.finite_densities.values())
    with pytest.raises(CutoffTooSmall):
        density_profile(i4, 53, 50)
