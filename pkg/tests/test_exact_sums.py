from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sifted_mobius import exact_sums as es
from sifted_mobius.combinatorics import binom


def brute_mkw(x, y, k, residue=None):
    total = 0
    for n in range(1, x + 1):
        mu = int(sympy.mobius(n))
        if mu == 0:
            continue
        ps = sympy.primefactors(n)
        p1 = ps[0] if ps else math.inf
        if p1 <= y:
            continue
        if residue is not None and (n == 1 or p1 % residue[0] != residue[1] % residue[0]):
            continue
        total += mu * binom(len(ps) - 1, k - 1)
    return total


@given(st.integers(1, 1500), st.floats(1.9, 40.0), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_mkw_brute(x, y, k):
    assert es.mkw(x, y, k) == brute_mkw(x, y, k)


@given(st.integers(1, 1500), st.floats(1.9, 20.0), st.integers(1, 3), st.sampled_from([(4, 1), (4, 3), (3, 2), (5, 2)]))
@settings(max_examples=40, deadline=None)
def test_mkw_residue_brute(x, y, k, res):
    assert es.mkw_exact(es.SumRequest(x, y, k, res)) == brute_mkw(x, y, k, res)


def test_examples():
    assert es.mkw(100, 11, 2) == 0
    assert es.mkw(1, 5, 1) == 1
    assert es.mkw(1, 5, 2) == 0


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("x", [10**3, 10**4, 10**5, 10**6])
def test_vanishing_above_kth_root(k, x):
    assert es.mkw(x, 1.01 * x ** (1 / k), k) == 0


def test_mertens_reduction():
    for x in (1, 2, 10, 100, 999, 10**4):
        direct = sum(int(sympy.mobius(n)) for n in range(1, x + 1)) if x <= 1000 else None
        assert es.mkw(x, 1.9, 1) == es.mertens_function(x)
        if direct is not None:
            assert es.mertens_function(x) == direct
    assert es.mertens_function(10**4) == -23


@given(st.integers(1, 60000), st.integers(1000, 30000), st.integers(1, 3), st.floats(1.9, 100.0))
@settings(max_examples=15, deadline=None)
def test_partition_invariance(x, seg, k, y):
    assert es.mkw_exact(es.SumRequest(x, y, k), segment=seg) == es.mkw(x, y, k)


def test_request_validation():
    with pytest.raises(ValueError):
        es.SumRequest(0, 2.0, 1)
    with pytest.raises(ValueError):
        es.SumRequest(10, 2.0, 0)
    with pytest.raises(ValueError):
        es.SumRequest(10, 2.0, 1, (4, 2))
    with pytest.raises(ValueError):
        es.mkw_exact(es.SumRequest(10**6, 2.0, 1), ceiling=10**5)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("name", sorted(es.FIXTURE_FUNCTIONS))
def test_duality_grouped_equals_brute(k, name):
    f = es.FIXTURE_FUNCTIONS[name]
    for n in list(range(1, 400)) + [2 * 3 * 5 * 7 * 11 * 13, 3 * 5 * 7 * 11 * 13 * 17 * 19]:
        ps = sympy.primefactors(n)
        assert es.duality_sides(ps, k, f) == es.duality_sides(ps, k, f, brute=True)


@given(st.lists(st.sampled_from(list(sympy.primerange(2, 200))), min_size=0, max_size=9, unique=True), st.integers(1, 4))
@settings(max_examples=200, deadline=None)
def test_duality_relations_hold(primes, k):
    for f in es.FIXTURE_FUNCTIONS.values():
        l1, r1, l2, r2 = es.duality_sides(primes, k, f)
        assert l1 == r1 and l2 == r2


def test_duality_scan_small():
    assert es.duality_scan(5000, [1, 2, 3], es.FIXTURE_FUNCTIONS) == []
    assert es.duality_check(30030, 2, es.FIXTURE_FUNCTIONS["identity"]) == (True, True)


def test_residue_series_excludes_one():
    # n = 2..10 squarefree with weight mu(n)/n; n = 1 has no least prime factor
    expected = Fraction(-1, 2) - Fraction(1, 3) - Fraction(1, 5) + Fraction(1, 6) - Fraction(1, 7) + Fraction(1, 10)
    assert es.residue_series_exact(1, 0, 10, 1) == expected
    assert es.residue_series_partial(1, 0, 10, 1) == pytest.approx(float(expected), abs=1e-15)
    assert float(expected) == pytest.approx(-191 / 210)


@pytest.mark.parametrize("m,l,k", [(4, 1, 1), (4, 3, 2), (3, 1, 2), (5, 2, 3)])
def test_residue_partial_matches_exact(m, l, k):
    assert es.residue_series_partial(m, l, 3000, k) == pytest.approx(float(es.residue_series_exact(m, l, 3000, k)), abs=1e-13)


def test_residue_validation():
    with pytest.raises(ValueError):
        es.residue_series_partial(4, 2, 100, 1)


def test_upper_bound_ratio():
    r = es.upper_bound_ratio(10**6, 10, 2)
    assert math.isfinite(r) and r > 0
    with pytest.raises(ValueError):
        es.upper_bound_ratio(10**4, 101, 2)
    grid = [es.upper_bound_ratio(x, y, 2) for x in (10**4, 10**5, 10**6) for y in (2, 5, 10, 50)]
    assert max(grid) < 10
