from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sifted_mobius import primesums as ps
from sifted_mobius.combinatorics import t_coeff
from sifted_mobius.constants import EULER_GAMMA
from sifted_mobius.sieve import primes_up_to


def _primes(y):
    return list(sympy.primerange(2, int(y) + 1))


@given(st.sampled_from(["M", "Q"]), st.integers(0, 4), st.integers(2, 3000))
@settings(max_examples=40, deadline=None)
def test_mertens_sum_brute(kind, power, y):
    ref = math.fsum(math.log(p) ** power / ((p - 1) if kind == "M" else p) for p in _primes(y))
    assert ps.mertens_sum(kind, power, y) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_mertens_sum_grid_matches_pointwise():
    ys = [10.0, 100.0, 1000.0, 12345.0]
    grid = ps.mertens_sum_grid("M", 2, ys)
    assert np.allclose(grid, [ps.mertens_sum("M", 2, y) for y in ys], rtol=1e-13)
    with pytest.raises(ValueError):
        ps.mertens_sum_grid("M", 2, [100.0, 10.0])


def test_m0_at_least_q0():
    for y in (10, 1000, 10**5):
        assert ps.mertens_sum("M", 0, y) >= ps.mertens_sum("Q", 0, y)


def test_g_deriv_examples():
    assert ps.g_deriv(0, 10) == pytest.approx(-4.375, abs=1e-12)
    assert ps.g_deriv(1, 10) == pytest.approx(8.6149, abs=1e-4)


@pytest.mark.parametrize("y", [10, 30, 100])
def test_g_deriv_equals_mertens_product(y):
    prod = math.prod(1 / (1 - 1 / p) for p in _primes(y))
    assert ps.g_deriv(0, y) == pytest.approx(-prod, rel=1e-13)


@pytest.mark.parametrize("y", [10, 50])
@pytest.mark.parametrize("N", range(0, 5))
def test_g_deriv_against_symbolic_derivative(y, N):
    with mpmath.workdps(40):
        f = lambda s: -mpmath.fprod(1 / (1 - mpmath.power(p, -s)) for p in _primes(y))
        ref = mpmath.diff(f, 1, N)
    assert ps.g_deriv(N, y) == pytest.approx(float(ref), rel=1e-10)


def test_integral_tail_matches_quadrature():
    for j in range(5):
        ref = mpmath.quad(lambda u: mpmath.log(u) ** j / u**2, [1e4, mpmath.inf])
        assert ps.integral_tail(j, 1e4) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n,j", [(1, 0), (1, 3), (2, 2), (3, 4)])
def test_v_power_coefficients(n, j):
    p = 7
    with mpmath.workdps(40):
        ref = mpmath.diff(lambda s: 1 / (mpmath.power(p, s) - 1) ** n, 1, j)
        v = mpmath.mpf(1) / (p - 1)
        c = ps._v_power_coeffs(n, j)
        val = (-mpmath.log(p)) ** j * sum(a * v**k for k, a in enumerate(c))
    assert float(val) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("j", range(0, 5))
@pytest.mark.parametrize("y", [1e2, 1e3, 1e4])
def test_xi_bound(j, y):
    p = primes_up_to(10**6).upto(10**6)
    p = p[p > y].astype(float)
    bound = 25 * math.factorial(j + 2) ** 2 * (math.ceil(math.log(y)) / math.log(2)) ** (j + 1) / ((j + 2) * y)
    for k in range(2, j + 2):
        tail = math.fsum((np.log(p) ** j * t_coeff(j, k) / (p - 1) ** k).tolist())
        assert tail <= bound


def test_first_z_derivative_against_euler_product():
    y = 100.0
    g0 = ps.G_deriv(0, 0, y)
    g1 = ps.G_deriv(0, 1, y)
    h = 1e-3
    f = lambda z: ps.euler_product_g(y, z).value
    ref = (f(-1 + h) - f(-1 - h)) / (2 * h)
    assert g1.value == pytest.approx(ref, abs=1e-5 + g1.radius)
    assert g0.value == pytest.approx(f(-1.0), rel=1e-6)


def test_continuation_loglog_convergence():
    # E_0(y) + log log y settles as y grows (it tends to a constant)
    vals = [ps.continuation_value(0, y).value + math.log(math.log(y)) for y in (1e3, 1e4, 1e5, 1e6)]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert diffs[0] > diffs[1] > diffs[2]


@pytest.mark.parametrize("y", [10.0, 100.0])
@pytest.mark.parametrize("i,N", [(1, 0), (1, 2), (2, 1), (3, 0)])
def test_tail_cut_doubling_within_radius(y, i, N):
    P = ps.default_tail_cut(y)
    a = ps.G_deriv(N, i, y, P)
    b = ps.G_deriv(N, i, y, 2 * P)
    assert abs(a.value - b.value) < 2 * a.radius


def test_tolerance_doubling_and_error():
    loose = ps.continuation_value(1, 100.0, tol=1e-3)
    assert loose.radius <= 1e-3
    tight = ps.continuation_value(1, 100.0, tol=1e-5)
    assert tight.radius <= 1e-5
    assert abs(tight.value - loose.value) < loose.radius + tight.radius
    with pytest.raises(ps.ToleranceError):
        ps.continuation_value(1, 100.0, tol=1e-12)
    with pytest.raises(ps.ToleranceError):
        ps.continuation_value(1, 100.0, tail_cut=1e6, tol=1e-9)


@pytest.mark.parametrize("y", [10.0, 100.0])
def test_second_z_derivative_consistency(y):
    """k = 3 needs G_2: compare with a five-point z-difference of the Euler product."""
    h = 0.01
    f = lambda z: ps.euler_product_g(y, z).value
    fd = (-f(-1 + 2 * h) + 16 * f(-1 + h) - 30 * f(-1) + 16 * f(-1 - h) - f(-1 - 2 * h)) / (12 * h * h)
    g2 = ps.G_deriv(0, 2, y)
    assert abs(g2.value - fd) < g2.radius + 1e-5


def test_profile_invariants():
    prof = ps.profile(1e3, max_n=3, max_i=2)
    assert prof.g_derivs[0][0] == pytest.approx(-math.prod(1 / (1 - 1 / p) for p in _primes(1000)), rel=1e-12)
    assert prof.mertens_M[0] >= prof.mertens_Q[0]
    assert all(r > 0 for r in prof.tail_bounds)
    assert len(prof.g_derivs) == 3 and len(prof.g_derivs[0]) == 4


def test_mertens_product_deviation_shrinks():
    devs = [abs(ps.mertens_product_deviation(10.0**e)) for e in range(3, 8)]
    assert all(b < a for a, b in zip(devs, devs[1:]))


@pytest.mark.parametrize("N,target", [(1, 1.0), (2, 0.5)])
def test_asymptotic_fit_leading(N, target):
    ys = np.logspace(3, 7, 41)
    fit = ps.asymptotic_fit(ys, ps.mertens_sum_grid("M", N, ys), N)
    assert fit.leading == pytest.approx(target, rel=0.05 if N > 1 else 0.01)
    assert abs(fit.residuals[-1]) < abs(fit.residuals[0]) or abs(fit.residuals[-1]) < 1e-2


def test_asymptotic_fit_rejects_narrow_span():
    ys = np.linspace(1000, 1500, 10)
    with pytest.raises(ps.IllConditionedFit):
        ps.asymptotic_fit(ys, ps.mertens_sum_grid("M", 1, ys), 1)


def test_first_order_mertens_constant():
    assert ps.mertens_sum("M", 1, 1e7) - math.log(1e7) == pytest.approx(-EULER_GAMMA, abs=0.01)


def test_certified_arithmetic():
    a = ps.Certified(2.0, 0.1)
    b = ps.Certified(-3.0, 0.2)
    assert (a + b).value == -1.0 and (a + b).radius == pytest.approx(0.3)
    c = a * b
    assert c.value == -6.0
    # the radius covers every product of points in the two intervals
    corners = [x * y for x in (1.9, 2.1) for y in (-3.2, -2.8)]
    assert max(abs(v - c.value) for v in corners) <= c.radius + 1e-12


def test_euler_product_domain():
    with pytest.raises(ValueError):
        ps.euler_product_g(10.0, 0.0)
    with pytest.raises(ValueError):
        ps.g_deriv(0, 1.5)
