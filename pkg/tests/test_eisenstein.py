from fractions import Fraction

import pytest

from quadrep.eisenstein import (
    BoundReport,
    cor42_bound,
    cor42_ratio,
    lemma33_ratio,
    lemma41_denominator,
    lemma41_ratio,
    split,
    theorem14_condition,
    theorem14_ratio,
)
from quadrep.enumeration import count_representations, cumulative_counts
from quadrep.family import FamilySpec, generate_family
from quadrep.forms import diagonal_form, scaled_identity
from quadrep.intervals import Interval


def test_split_examples(i4):
    sp8 = split(scaled_identity(8), 1)
    assert sp8.tau.contains(0) and sp8.tau.width < Fraction(1, 10)
    assert split(i4, 1).tau.contains(0)


def test_split_is_consistent():
    spec = FamilySpec(seed=4, k_values=(4, 5), count=3, H=2)
    for f in generate_family(spec):
        for n in (3, 10, 21):
            sp = split(f, n, 10**4)
            assert sp.consistent()
            assert (sp.rho + sp.tau).contains(sp.r)


def test_theorem14_examples(i4):
    assert theorem14_ratio(i4, 1).contains(32)
    assert not theorem14_condition(i4, 1)
    n = 10**6 + 3
    assert theorem14_condition(i4, n)
    iv = theorem14_ratio(i4, n)
    assert 0 < iv.lo <= iv.hi < 100
    # a form that misses n entirely
    f = diagonal_form(2, 2, 2, 2)
    assert count_representations(f, 1) == 0
    assert theorem14_ratio(f, 1).hi == 0


def test_lemma33_and_41_finite(i4):
    assert lemma41_ratio(i4, 25).hi < 100
    r = lemma33_ratio(i4, 25)
    assert r.lo >= 0
    assert lemma41_ratio(diagonal_form(2, 2, 2, 2), 1).hi == 0


def test_lemma41_denominator_is_product():
    # first term n^{1/2}/sqrt(mu1 mu2) ... with unit minima reduces to n^{(k-2)/2} for k = 4 plus lower terms
    d = lemma41_denominator((1, 1, 1, 1), 16)
    assert d.lo > 0


def test_cor42_example(i4):
    s1, s2 = cumulative_counts(i4, 1)
    assert s2 == 65
    ratio = cor42_ratio(i4, 1)
    bound = cor42_bound(4, 16, 1)
    assert (bound * ratio).contains(65) or abs(float((bound * ratio).mid) - 65) < 1e-9


def test_bound_report_halves():
    rep = BoundReport("x", 0.1)
    for n, v in [(1, 5), (2, 4), (3, 4), (4, 3)]:
        rep.add("f", n, Interval(v))
    rep.add("g", 4, Interval(100), condition_ok=False)
    assert rep.family_max() == 5
    assert rep.half_maxima() == (5, 4)
    assert rep.stable()
    rep.add("h", 4, Interval(6))
    assert not rep.stable()
