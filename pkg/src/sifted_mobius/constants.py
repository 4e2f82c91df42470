"""Analytic constants: zeta at real points, Stieltjes constants, Gamma^(j)(1)
and the reciprocal-gamma derivatives Gamma_{m,N}.

Gamma_{m,N} is the m-th derivative of z -> 1/Gamma(-z) at z = N+1. Writing
z = N+1+t,

    1/Gamma(-z) = (-1)^N * sin(pi t)/pi * Gamma(1+t) * prod_{i=1}^{N+1} (t+i)

so Gamma_{m,N} = m! [t^m] of that product. Expanding each factor gives the
closed form with weight m!/(i! j!) on the sin/Gamma Taylor terms and the
Taylor coefficient c(N+2, k+1) of the falling factorial.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

from .combinatorics import bell_complete, stirling1_unsigned

EULER_GAMMA = 0.57721566490153286061
PI = math.pi

_EM_TERMS = 14
_EM_CUT = 20


class ConvergenceError(ArithmeticError):
    """A numerical scheme failed to reach its target accuracy."""


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return b[n]


def zeta_real(s: float, cut: int = _EM_CUT, terms: int = _EM_TERMS) -> tuple[float, float]:
    """zeta(s) for real s > 1 by Euler-Maclaurin.

    Returns (value, bound) where bound is the magnitude of the first omitted
    correction term, which dominates the remainder for real s.
    """
    if s <= 1:
        raise ValueError("zeta_real needs s > 1")
    head = math.fsum(n ** (-s) for n in range(1, cut))
    parts = [head, cut ** (1 - s) / (s - 1), 0.5 * cut ** (-s)]
    rising = s
    power = cut ** (-s - 1)
    for k in range(1, terms + 2):
        term = float(bernoulli(2 * k)) / factorial(2 * k) * rising * power
        if k == terms + 1:
            return math.fsum(parts), abs(term)
        parts.append(term)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= cut * cut
    raise AssertionError("unreachable")


def zeta_at_integer(n: int) -> float:
    """zeta(n) for integer n >= 2."""
    if n < 2:
        raise ValueError("zeta_at_integer needs n >= 2")
    return zeta_real(float(n))[0]


def _log_poly_derivs(n: int, count: int) -> list[list[int]]:
    """Integer polynomials P_r with (d/dt)^r (log t)^n / t = t^(-1-r) P_r(log t)."""
    polys = [[0] * n + [1]]
    for r in range(count):
        p = polys[-1]
        d = [i * p[i] for i in range(1, len(p))] + [0]
        polys.append([d[i] - (r + 1) * p[i] for i in range(len(p))])
    return polys


@lru_cache(maxsize=None)
def stieltjes_const(n: int, cut: int = 20, terms: int = 10) -> float:
    """gamma_n = lim_M [sum_{k<=M} (log k)^n/k - (log M)^{n+1}/(n+1)].

    The limit is taken analytically: Euler-Maclaurin at the cut supplies the
    tail corrections. The head sum cancels against (log M)^{n+1}/(n+1), so
    the arithmetic runs at 30 digits.
    """
    if not 0 <= n <= 8:
        raise ValueError("stieltjes_const supports 0 <= n <= 8")
    with mpmath.workdps(30):
        lm = mpmath.log(cut)
        acc = mpmath.fsum(mpmath.log(k) ** n / k for k in range(1, cut + 1))
        acc -= lm ** (n + 1) / (n + 1) + lm**n / (2 * cut)
        polys = _log_poly_derivs(n, 2 * terms)
        for j in range(1, terms + 1):
            r = 2 * j - 1
            deriv = mpmath.fsum(c * lm**i for i, c in enumerate(polys[r])) * mpmath.mpf(cut) ** (-1 - r)
            b = bernoulli(2 * j)
            acc -= mpmath.mpf(b.numerator) / b.denominator / factorial(2 * j) * deriv
        return float(acc)


def gamma_deriv_at_1(j: int) -> float:
    """Gamma^(j)(1) = Y_j(-gamma, 1! zeta(2), -2! zeta(3), ...)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    args = [-EULER_GAMMA] + [(-1) ** i * factorial(i - 1) * zeta_at_integer(i) for i in range(2, j + 1)]
    return bell_complete(j, args)


def _check_mn(m: int, N: int) -> None:
    if not (0 <= m <= 12 and 0 <= N <= 8):
        raise ValueError(f"Gamma_({m},{N}) needs 0 <= m <= 12 and 0 <= N <= 8")


def gamma_mn_closed(m: int, N: int) -> float:
    """Gamma_{m,N} from the Leibniz expansion (sin x Gamma x falling factorial)."""
    _check_mn(m, N)
    terms = []
    for i in range(1, m + 1, 2):
        sin_part = (-1) ** ((i - 1) // 2) * PI ** (i - 1) / factorial(i)
        for j in range(m - i + 1):
            k = m - i - j
            if k + 1 > N + 2:
                continue
            terms.append(sin_part * gamma_deriv_at_1(j) / factorial(j) * stirling1_unsigned(N + 2, k + 1))
    return (-1) ** N * factorial(m) * math.fsum(terms)


def _reciprocal_gamma_neg(z):
    # 1/Gamma(-z) through the reflection identity; no poles at z = N+1
    return -mpmath.sin(mpmath.pi * z) * mpmath.gamma(1 + z) / mpmath.pi


def gamma_mn_oracle(m: int, N: int, h0: float = 0.125, levels: int = 8, dps: int = 50) -> float:
    """Gamma_{m,N} by Richardson-extrapolated central differences.

    Raises:
        ConvergenceError: the last two extrapolants disagree by more than
            1e-13 (relative to max(1, |value|)).
    """
    _check_mn(m, N)
    if m == 0:
        return float(_reciprocal_gamma_neg(mpmath.mpf(N + 1)))
    with mpmath.workdps(dps):
        z0 = mpmath.mpf(N + 1)

        def central(h):
            h = mpmath.mpf(h)
            acc = mpmath.mpf(0)
            for i in range(m + 1):
                acc += (-1) ** i * comb(m, i) * _reciprocal_gamma_neg(z0 + (mpmath.mpf(m) / 2 - i) * h)
            return acc / h**m

        table = [[central(h0 / 2**k)] for k in range(levels)]
        for k in range(1, levels):
            for r in range(1, k + 1):
                f = mpmath.mpf(4) ** r
                table[k].append((f * table[k][r - 1] - table[k - 1][r - 1]) / (f - 1))
        best, prev = table[-1][-1], table[-2][-1]
        residual = abs(best - prev)
        if residual > 1e-13 * max(1, abs(best)):
            raise ConvergenceError(f"Gamma_({m},{N}) finite differences stalled, residual {float(residual):.3e}")
        return float(best)


@dataclass(frozen=True)
class AnalyticConstants:
    pi: float
    euler_gamma: float
    zeta_int: dict[int, float]
    stieltjes: list[float]
    precision: int


def analytic_constants(max_order: int = 8) -> AnalyticConstants:
    zi = {n: zeta_at_integer(n) for n in range(2, max_order + 1)}
    st = [stieltjes_const(n) for n in range(max_order + 1)]
    digits = int(-math.log10(max(abs(zi[2] - PI**2 / 6), 1e-17) / zi[2]))
    return AnalyticConstants(PI, EULER_GAMMA, zi, st, digits)


@dataclass
class GammaConstTable:
    method: str
    entries: dict[tuple[int, int], float] = field(default_factory=dict)


def gamma_table(max_m: int, max_n: int, method: str = "closed_form") -> GammaConstTable:
    """Gamma_{m,N} for m <= max_m, N <= max_n by one method."""
    if method == "closed_form":
        fn = gamma_mn_closed
    elif method == "finite_diff":
        fn = gamma_mn_oracle
    elif method == "contour":
        from .hankel import HankelContourSpec, hankel_integral

        spec = HankelContourSpec(cutoff=40.0)

        def fn(m, N):
            return hankel_integral(m, N, spec)
    else:
        raise ValueError(f"unknown method {method!r}")
    t = GammaConstTable(method)
    for m in range(max_m + 1):
        for N in range(max_n + 1):
            t.entries[(m, N)] = fn(m, N)
    return t


def dump_csv(max_m: int = 4, max_n: int = 5) -> str:
    """Gamma_{m,N} by all three methods with absolute discrepancies."""
    tables = {meth: gamma_table(max_m, max_n, meth) for meth in ("closed_form", "finite_diff", "contour")}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "N", "closed_form", "finite_diff", "contour", "abs_fd", "abs_contour"])
    for m in range(max_m + 1):
        for N in range(max_n + 1):
            c, f, h = (tables[k].entries[(m, N)] for k in ("closed_form", "finite_diff", "contour"))
            w.writerow([m, N, repr(c), repr(f), repr(h), f"{abs(c - f):.3e}", f"{abs(c - h):.3e}"])
    return buf.getvalue()
