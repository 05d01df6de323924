import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisor_sigma, divisors

from quadrep.enumeration import (
    available_backends,
    backend,
    coset_histogram,
    count_representations,
    cumulative_counts,
    list_representations,
    list_short_vectors,
    naive_box_counts,
    representation_numbers,
    use_backend,
)
from quadrep.errors import BudgetExceeded
from quadrep.family import FamilySpec, generate_family, small_discriminant_family
from quadrep.forms import diagonal_form, scaled_identity, validate


def r4(n):
    # Jacobi: r_4(n) = 8 sigma(n) - 32 sigma(n/4)
    if n == 0:
        return 1
    return 8 * int(divisor_sigma(n)) - (32 * int(divisor_sigma(n // 4)) if n % 4 == 0 else 0)


def r8(n):
    if n == 0:
        return 1
    return 16 * sum((-1) ** (n + d) * d**3 for d in divisors(n))


def test_examples(i4):
    assert [count_representations(i4, n) for n in range(3)] == [1, 8, 24]
    assert count_representations(scaled_identity(8), 1) == 16
    assert cumulative_counts(i4, 1) == (9, 65)
    assert cumulative_counts(i4, 2) == (33, 641)
    assert cumulative_counts(i4, 0) == (1, 1)


def test_list_examples(i4):
    assert sorted(list_representations(i4, 1)) == sorted(
        tuple(s * (i == j) for j in range(4)) for i in range(4) for s in (1, -1)
    )
    vecs = list_representations(scaled_identity(5), 4)
    assert len(vecs) == 90
    assert sum(1 for v in vecs if max(map(abs, v)) == 2) == 10
    # 2 x^2 + 2 y^2 + 6 z^2 + 6 w^2 never equals an odd number
    assert list_representations(diagonal_form(1, 1, 3, 3), 3) != []
    assert list_representations(diagonal_form(2, 2, 2, 2), 1) == []


def test_jacobi_four_squares(i4):
    r = representation_numbers(i4, 300)
    assert r == [r4(n) for n in range(301)]
    assert count_representations(i4, 10**6 + 3) == r4(10**6 + 3)


def test_jacobi_eight_squares():
    r = representation_numbers(scaled_identity(8), 60)
    assert r == [r8(n) for n in range(61)]


def _family():
    spec = FamilySpec(seed=11, k_values=(4, 5, 6), count=6, H=3)
    return generate_family(spec)


@pytest.mark.parametrize("idx", range(6))
def test_box_oracle(idx):
    f = _family()[idx]
    box = naive_box_counts(f, 60)
    assert representation_numbers(f, 60) == box
    assert [count_representations(f, n) for n in range(0, 61, 7)] == box[0::7]


def test_small_disc_forms_against_box():
    for name, f in small_discriminant_family(5, 4):
        assert representation_numbers(f, 20) == naive_box_counts(f, 20), name


@pytest.mark.parametrize("threads", [2, 5])
def test_threads_do_not_change_counts(threads):
    f = _family()[2]
    assert representation_numbers(f, 80, threads=threads) == representation_numbers(f, 80)
    assert count_representations(f, 77, threads=threads) == count_representations(f, 77)


def test_backends_agree():
    assert backend() in available_backends()
    forms = _family()[:3] + [small_discriminant_family(1, 5)[0][1], scaled_identity(5)]
    results = {}
    for b in available_backends():
        with use_backend(b):
            results[b] = [(representation_numbers(f, 40), count_representations(f, 37)) for f in forms]
    vals = list(results.values())
    assert all(v == vals[0] for v in vals)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        with use_backend("fortran"):
            pass


def test_big_entries_fall_back_exactly():
    # Gram entries large enough to leave the int64 range inside the kernel
    f = diagonal_form(10**9, 10**9 + 1, 10**9 + 2, 3 * 10**9)
    n = 3 * 10**9 + 3
    expected = sum(1 for x in itertools.product(range(-2, 3), repeat=4) if f.value(x) == n)
    assert count_representations(f, n) == expected


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        count_representations(validate(small_discriminant_family(3, 6)[0][1].gram), 500, budget=1000)


def test_short_vectors_sorted_unique():
    f = _family()[0]
    vecs = list_short_vectors(f, 30)
    assert len(vecs) == len(set(vecs))
    assert all(0 < f.value(v) <= 30 for v in vecs)
    assert len(vecs) == sum(naive_box_counts(f, 30)[1:])


def test_coset_histogram_matches_filter():
    g = ((2, 1, 0), (1, 4, 1), (0, 1, 6))
    res = (1, 0, 1)
    h = coset_histogram(g, 40, res, q=2)
    brute = [0] * 41
    for x in itertools.product(range(-8, 9), repeat=3):
        if all((a - r) % 2 == 0 for a, r in zip(x, res)):
            v = sum(x[i] * g[i][j] * x[j] for i in range(3) for j in range(3))
            if v <= 40:
                brute[v] += 1
    assert h == brute


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.integers(0, 30))
def test_diagonal_counts_match_product(coeffs, n):
    f = diagonal_form(*coeffs)
    brute = sum(
        1 for x in itertools.product(range(-6, 7), repeat=len(coeffs))
        if sum(c * v * v for c, v in zip(coeffs, x)) == n
    )
    assert count_representations(f, n) == brute


def test_negative_n_rejected(i4):
    with pytest.raises(ValueError):
        count_representations(i4, -1)
