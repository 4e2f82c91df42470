from __future__ import annotations

import math
from itertools import permutations, product

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import stirling

from sifted_mobius.combinatorics import (
    bell_complete,
    binom,
    dump_csv,
    falling_factorial_derivative,
    fubini,
    stirling1_unsigned,
    stirling2,
    t_coeff,
    t_row_sum,
)


def _set_partitions_by_blocks(n):
    """Count set partitions of an n-set by number of blocks (restricted growth strings)."""
    counts = [0] * (n + 1)
    if n == 0:
        counts[0] = 1
        return counts
    for rgs in product(range(n), repeat=n):
        if rgs[0] != 0:
            continue
        ok = all(rgs[i] <= max(rgs[:i]) + 1 for i in range(1, n))
        if ok:
            counts[max(rgs) + 1] += 1
    return counts


def _cycles(perm):
    seen, c = set(), 0
    for i in range(len(perm)):
        if i not in seen:
            c += 1
            while i not in seen:
                seen.add(i)
                i = perm[i]
    return c


@pytest.mark.parametrize("n", range(0, 7))
def test_stirling2_by_enumeration(n):
    counts = _set_partitions_by_blocks(n)
    assert [stirling2(n, k) for k in range(n + 1)] == counts


@pytest.mark.parametrize("n", range(0, 7))
def test_stirling1_by_cycle_count(n):
    counts = [0] * (n + 1)
    for p in permutations(range(n)):
        counts[_cycles(p)] += 1
    assert [stirling1_unsigned(n, k) for k in range(n + 1)] == counts


@given(st.integers(0, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
@settings(max_examples=200, deadline=None)
def test_stirling_against_sympy(nk):
    n, k = nk
    assert stirling2(n, k) == stirling(n, k, kind=2)
    assert stirling1_unsigned(n, k) == stirling(n, k, kind=1, signed=False)


def test_stirling_range_errors():
    with pytest.raises(ValueError):
        stirling2(65, 1)
    with pytest.raises(ValueError):
        stirling1_unsigned(3, 4)


def test_binom_convention():
    assert binom(-1, 0) == 1
    assert binom(-1, 1) == 0
    assert binom(2, 3) == 0
    assert binom(5, 2) == 10
    with pytest.raises(ValueError):
        binom(-2, 0)


def test_fubini_examples_and_enumeration():
    assert fubini(0) == 1
    assert fubini(3) == 13
    assert fubini(4) == 75
    for n in range(1, 6):
        # ordered set partitions = surjections onto an ordered set of blocks
        count = sum(
            1
            for k in range(1, n + 1)
            for f in product(range(k), repeat=n)
            if len(set(f)) == k
        )
        assert fubini(n) == count


@pytest.mark.parametrize("j", range(0, 13))
def test_fubini_bound(j):
    assert fubini(j + 1) < math.factorial(j + 1) / math.log(2) ** (j + 2)


@pytest.mark.parametrize("j", range(0, 13))
def test_t_row_sum_dominated_by_fubini(j):
    # the row sum is used only through the Fubini bound, which this implies
    assert 0 < t_row_sum(j) <= fubini(j + 1)


@pytest.mark.parametrize("p", [2, 3, 7, 101])
@pytest.mark.parametrize("j", range(0, 7))
def test_derivative_identity(p, j):
    s0 = mpmath.mpf("1.5")
    with mpmath.workdps(40):
        numeric = mpmath.diff(lambda s: -mpmath.log(p) / (mpmath.power(p, s) - 1), s0, j)
        v = 1 / (mpmath.power(p, s0) - 1)
        closed = (-mpmath.log(p)) ** (j + 1) * sum(t_coeff(j, k) * v**k for k in range(1, j + 2))
    assert float(abs(numeric - closed)) <= 1e-6 * float(abs(closed))


def test_t_coeff_domain():
    with pytest.raises(ValueError):
        t_coeff(2, 4)
    with pytest.raises(ValueError):
        t_coeff(2, 0)


@pytest.mark.parametrize("N", range(0, 7))
def test_falling_factorial_identity(N):
    z = sympy.Symbol("z")
    P = sympy.prod([z - i for i in range(N + 1)])
    for k in range(N + 3):
        d = sympy.diff(P, z, k).subs(z, N + 1)
        assert d == falling_factorial_derivative(N, k)
        if k <= N + 1:
            assert d == math.factorial(k) * stirling1_unsigned(N + 2, k + 1)


@given(st.lists(st.integers(-5, 5), min_size=0, max_size=7))
@settings(max_examples=60, deadline=None)
def test_bell_complete_against_sympy(xs):
    j = len(xs)
    syms = [sympy.Integer(x) for x in xs]
    expected = 1 if j == 0 else sum(sympy.bell(j, k, syms[: j - k + 1]) for k in range(1, j + 1))
    assert bell_complete(j, xs) == expected


def test_bell_complete_errors():
    with pytest.raises(ValueError):
        bell_complete(3, [1, 2])


def test_dump_csv_header_and_rows():
    text = dump_csv(3)
    lines = text.splitlines()
    assert lines[0] == "table,n,k,value"
    assert "fubini,3,,13" in lines
    assert "t_coeff,2,3,2" in lines
