from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from richlines.additive import (
    additive_energy,
    additive_energy_quadruples,
    iterated_sumset,
    multiplicative_energy,
    plunnecke_check,
    product_set,
    ratio_set,
    sigma_set,
    small_doubling_subset,
    sumset,
)
from richlines.errors import PreconditionError

small_sets = st.sets(st.fractions(min_value=-10, max_value=10, max_denominator=3), min_size=1, max_size=10)
nonzero_sets = st.sets(
    st.fractions(min_value=-10, max_value=10, max_denominator=3).filter(bool), min_size=1, max_size=8
)


def test_set_operation_examples():
    assert sumset({1, 2}, {1, 2}) == (2, 3, 4)
    assert product_set({1, 2, 4}, {1, 2, 4}) == (1, 2, 4, 8, 16)
    assert ratio_set({2, 4}, {2, 4}) == (F(1, 2), 1, 2)
    with pytest.raises(PreconditionError, match="zero divisor"):
        ratio_set({1}, {0, 1})
    with pytest.raises(PreconditionError):
        product_set({0, 1}, {2})


def test_iterated_sumset_examples():
    assert iterated_sumset({0, 1}, 3) == (0, 1, 2, 3)
    assert iterated_sumset({5, 7}, 1) == (5, 7)
    assert iterated_sumset({0, 1, 4}, 2) == (0, 1, 2, 4, 5, 8)


def test_energy_examples():
    assert additive_energy({0}) == 1
    assert additive_energy({1, 2, 3}, {1, 2, 3}) == 19
    assert multiplicative_energy({1, 2, 4}) == 19


def test_sigma_examples():
    assert sigma_set({(1, 2), (2, 3)}) == (3, 5)
    assert sigma_set(set()) == ()
    A = (0, 1, 5)
    assert sigma_set(set(product(A, repeat=3))) == iterated_sumset(A, 3)
    with pytest.raises(PreconditionError):
        sigma_set({(1,), (1, 2)})


def test_small_doubling_examples():
    assert small_doubling_subset(range(1, 9), 2) == tuple(range(1, 9))
    sub = small_doubling_subset({1, 2, 4, 8, 16}, 1.6, min_size=2)
    assert len(sub) == 2 and len(sumset(sub, sub)) <= F(8, 5) * 2
    assert small_doubling_subset({1, 2, 3}, 3, min_size=4) is None
    assert small_doubling_subset({1, 2, 4, 8, 16}, "8/5", min_size=2) == sub


def test_plunnecke_examples():
    rep = plunnecke_check({0, 1}, 3)
    assert rep["K"] == F(3, 2) and rep["rows"][2]["size"] == 4
    rep = plunnecke_check(range(10), 6)
    assert [r["size"] for r in rep["rows"]] == [9 * n + 1 for n in range(1, 7)]
    assert plunnecke_check({0, 1, 10}, 6)["ok"]
    with pytest.raises(PreconditionError):
        plunnecke_check({0, 1}, 7)


@settings(max_examples=60)
@given(small_sets)
def test_energy_histogram_matches_quadruples(A):
    assert additive_energy(A) == additive_energy_quadruples(A)
    assert additive_energy(A, cross_check=True) == additive_energy(A)


@given(small_sets)
def test_cauchy_schwarz(A):
    assert additive_energy(A) * len(sumset(A, A)) >= len(A) ** 4


@given(small_sets)
def test_sumset_lower_bound(A):
    assert len(sumset(A, A)) >= 2 * len(A) - 1


@given(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4).filter(bool),
       st.integers(2, 12))
def test_ap_attains_sumset_minimum(a, d, n):
    A = [a + i * d for i in range(n)]
    assert len(sumset(A, A)) == 2 * n - 1


@given(st.integers(3, 12), st.integers(1, 10))
def test_perturbed_ap_exceeds_minimum(n, bump):
    A = list(range(n))
    A[-1] += bump  # no longer an AP once the last gap changes
    assert len(sumset(A, A)) > 2 * n - 1


@given(nonzero_sets)
def test_ratio_set_contains_one_and_reciprocals(S):
    R = set(ratio_set(S, S))
    assert 1 in R
    assert all(1 / r in R for r in R)


@settings(max_examples=30)
@given(st.sets(st.integers(-4, 4), min_size=1, max_size=4), st.integers(1, 3))
def test_sigma_of_full_product_is_iterated_sumset(A, k):
    assert sigma_set(set(product(sorted(A), repeat=k))) == iterated_sumset(A, k)
