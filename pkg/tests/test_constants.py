from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest

from sifted_mobius import constants
from sifted_mobius.constants import (
    EULER_GAMMA,
    bernoulli,
    gamma_deriv_at_1,
    gamma_mn_closed,
    gamma_mn_oracle,
    gamma_table,
    stieltjes_const,
    zeta_at_integer,
    zeta_real,
)
from sifted_mobius.series_asym import zeta_series


def test_bernoulli():
    assert [bernoulli(n) for n in (0, 1, 2, 4)] == [1, Fraction(-1, 2), Fraction(1, 6), Fraction(-1, 30)]


@pytest.mark.parametrize("n", range(2, 11))
def test_zeta_at_integer(n):
    assert zeta_at_integer(n) == pytest.approx(float(mpmath.zeta(n)), rel=1e-14)


def test_zeta_real_bound_covers_error():
    val, bound = zeta_real(1.3)
    assert abs(val - float(mpmath.zeta(1.3))) <= max(bound, 1e-15)


@pytest.mark.parametrize("n", range(0, 9))
def test_stieltjes_against_mpmath(n):
    ref = float(mpmath.stieltjes(n))
    assert stieltjes_const(n) == pytest.approx(ref, rel=1e-10, abs=1e-13)


def test_stieltjes_examples():
    assert stieltjes_const(0) == pytest.approx(0.577215664, abs=1e-9)
    assert stieltjes_const(1) == pytest.approx(-0.0728158, abs=1e-7)


def test_zeta_series_reproduces_zeta_three_halves():
    u = 0.5
    assert zeta_series(8).eval_u(u) == pytest.approx(zeta_real(1.5)[0] * u, abs=1e-8)


@pytest.mark.parametrize("j", range(0, 6))
def test_gamma_derivatives(j):
    ref = float(mpmath.diff(mpmath.gamma, 1, j))
    assert gamma_deriv_at_1(j) == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("m", range(0, 5))
@pytest.mark.parametrize("N", range(0, 6))
def test_closed_form_matches_finite_differences(m, N):
    assert abs(gamma_mn_closed(m, N) - gamma_mn_oracle(m, N)) < 1e-8


def test_spot_values():
    for N in range(6):
        assert abs(gamma_mn_closed(0, N)) < 1e-9
    assert gamma_mn_closed(1, 0) == pytest.approx(1.0, abs=1e-8)
    assert gamma_mn_closed(1, 1) == pytest.approx(-2.0, abs=1e-8)
    assert gamma_mn_closed(2, 0) == pytest.approx(2 * (1 - EULER_GAMMA), abs=1e-8)
    assert gamma_mn_oracle(2, 0) == pytest.approx(2 * (1 - EULER_GAMMA), abs=1e-8)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("which", [2, 3])
def test_linear_in_zeta_values(monkeypatch, m, which):
    """Up to m = 3 each zeta(j) enters Gamma_{m,N} linearly."""
    base = constants.zeta_at_integer

    def at(eps):
        monkeypatch.setattr(constants, "zeta_at_integer", lambda n: base(n) + (eps if n == which else 0.0))
        return [gamma_mn_closed(m, N) for N in range(4)]

    g0, g1, g2 = at(0.0), at(1e-3), at(2e-3)
    for a, b, c in zip(g0, g1, g2):
        assert abs(c - 2 * b + a) < 1e-12


def test_domain_errors():
    with pytest.raises(ValueError):
        gamma_mn_closed(13, 0)
    with pytest.raises(ValueError):
        stieltjes_const(9)
    with pytest.raises(ValueError):
        zeta_real(1.0)
    with pytest.raises(ValueError):
        gamma_table(1, 1, "guess")


def test_analytic_constants_digits():
    a = constants.analytic_constants(4)
    assert a.zeta_int[2] == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert a.precision >= 10
