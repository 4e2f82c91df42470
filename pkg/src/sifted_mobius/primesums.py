"""Prime sums at s = 1: Mertens-type sums, the continued log-zeta combination
E(s) = sum_{p>y} 1/(p^s-1) - log zeta(s) + 1, derivatives of

    g(s, y, -1) = -prod_{p<=y} (1 - p^-s)^-1

and the z-derivatives G_i(s, y, -1) = (D_z)^i g(s, y, z) at z = -1.

Every infinite sum over primes is cut at ``tail_cut`` and the remainder is
bounded by an integral of (log u)^j / u^2, so values come with a certified
radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import numpy as np

from .combinatorics import t_coeff
from .constants import EULER_GAMMA, ConvergenceError
from .sieve import primes_up_to

MAX_TAIL_CUT = 10**8
_EPS = np.finfo(float).eps


class ToleranceError(ConvergenceError):
    """Certified radius stayed above the requested tolerance."""

    def __init__(self, message: str, radius: float):
        super().__init__(message)
        self.radius = radius


@dataclass(frozen=True)
class Certified:
    """A value with an absolute error radius."""

    value: float
    radius: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "radius", float(self.radius))

    def __add__(self, other):
        other = _lift(other)
        return Certified(self.value + other.value, self.radius + other.radius)

    __radd__ = __add__

    def __mul__(self, other):
        other = _lift(other)
        r = abs(self.value) * other.radius + abs(other.value) * self.radius + self.radius * other.radius
        return Certified(self.value * other.value, r)

    __rmul__ = __mul__


def _lift(v) -> Certified:
    return v if isinstance(v, Certified) else Certified(float(v), 0.0)


def _fsum(arr) -> float:
    return math.fsum(np.asarray(arr, dtype=float).tolist())


def _check_y(y: float) -> None:
    if y < 1.9:
        raise ValueError(f"y={y} is below 1.9")


def default_tail_cut(y: float) -> int:
    return int(max(10**6, 100 * y))


# ---------------------------------------------------------------------------
# finite sums


def mertens_sum(kind: str, power: int, y: float) -> float:
    """M_N(y) = sum_{p<=y} (log p)^N/(p-1) (kind "M") or Q_j(y) = sum (log p)^j/p ("Q")."""
    _check_y(y)
    if not 0 <= power <= 8:
        raise ValueError("power must be in 0..8")
    p = primes_up_to(y).upto(y).astype(float)
    lp = np.log(p) ** power
    if kind == "M":
        return _fsum(lp / (p - 1))
    if kind == "Q":
        return _fsum(lp / p)
    raise ValueError(f"unknown kind {kind!r}")


def mertens_sum_grid(kind: str, power: int, ys: Sequence[float]) -> np.ndarray:
    """mertens_sum over an ascending grid, sharing one pass over the primes."""
    ys = list(ys)
    if any(b < a for a, b in zip(ys, ys[1:])):
        raise ValueError("grid must be ascending")
    p = primes_up_to(max(ys)).upto(max(ys)).astype(float)
    denom = p - 1 if kind == "M" else p
    terms = np.log(p) ** power / denom
    cuts = np.searchsorted(p, np.floor(ys), side="right")
    out, acc, prev = [], [], 0
    for c in cuts:
        acc.append(_fsum(terms[prev:c]))
        out.append(math.fsum(acc))
        prev = c
    return np.array(out)


def mertens_product_deviation(y: float) -> float:
    """e^gamma log y prod_{p<=y}(1-1/p) - 1."""
    _check_y(y)
    p = primes_up_to(y).upto(y).astype(float)
    log_prod = _fsum(np.log1p(-1.0 / p))
    return math.exp(EULER_GAMMA + log_prod) * math.log(y) - 1.0


@lru_cache(maxsize=64)
def _log_derivative_sum(j: int, y: float) -> float:
    """a_j(y) = -sum_{p<=y} D_s^j (log p/(p^s-1)) at s=1."""
    p = primes_up_to(y).upto(y).astype(float)
    v = 1.0 / (p - 1)
    inner = sum(t_coeff(j, k) * v**k for k in range(1, j + 2))
    return _fsum((-np.log(p)) ** (j + 1) * inner)


@lru_cache(maxsize=64)
def _g_derivs(y: float, N: int) -> tuple[float, ...]:
    p = primes_up_to(y).upto(y).astype(float)
    g = [-math.exp(-_fsum(np.log1p(-1.0 / p)))]
    for n in range(1, N + 1):
        g.append(math.fsum(comb(n - 1, j) * _log_derivative_sum(j, y) * g[n - 1 - j] for j in range(n)))
    return tuple(g)


def g_deriv(N: int, y: float) -> float:
    """D_s^N g(1, y, -1) by the Leibniz recursion on g_s = a(s) g."""
    _check_y(y)
    if not 0 <= N <= 8:
        raise ValueError("N must be in 0..8")
    return _g_derivs(float(y), N)[N]


# ---------------------------------------------------------------------------
# infinite sums with certified tails


def _v_power_coeffs(n: int, j: int) -> list[int]:
    """Integer c with D_s^j v^n = (-log p)^j sum_k c[k] v^k, v = 1/(p^s-1).

    Uses D v^k = -log p * k (v^k + v^(k+1)).
    """
    c = [0] * (n + j + 1)
    c[n] = 1
    for _ in range(j):
        nxt = [0] * len(c)
        for k, a in enumerate(c):
            if a:
                nxt[k] += k * a
                nxt[k + 1] += k * a
        c = nxt
    return c


def integral_tail(j: int, A: float) -> float:
    """int_A^inf (log u)^j/u^2 du, exact."""
    la = math.log(A)
    return math.fsum(factorial(j) / factorial(j - i) * la ** (j - i) for i in range(j + 1)) / A


def _tail_certificate(j: int, coeff_sum: float, P: float) -> float:
    # for p > P: |term| <= coeff_sum (log p)^j/(p-1)^2 <= coeff_sum (P/(P-1))^2 (log p)^j/p^2,
    # and (log u)^j/u^2 is decreasing past e^(j/2), so the prime sum sits under the integral
    if P < math.exp(j / 2 + 1):
        raise ValueError("tail_cut too small for the monotone tail bound")
    return coeff_sum * (P / (P - 1)) ** 2 * integral_tail(j, P)


@lru_cache(maxsize=16)
def _prime_arrays(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    p = primes_up_to(hi).upto(hi)
    p = p[p > lo].astype(float)
    return p, np.log(p)


@lru_cache(maxsize=32)
def prime_power_constant(j: int, P: float = 10**6) -> Certified:
    """B'_j = sum_p sum_{m>=2} (-m log p)^j/(m p^m), with a certified tail."""
    p, lp = _prime_arrays(1.0, P)
    parts = []
    m = 2
    while True:
        cut = int(np.searchsorted(lp, 200.0 / m))  # lp ascending; p^-m below e^-200 is dropped
        if cut == 0:
            break
        lq = lp[:cut]
        parts.append(_fsum((-m * lq) ** j * np.exp(-m * lq) / m))
        m += 1
    # primes > P: consecutive m-terms shrink by a factor below (3/2)^j/P < 1/2, so the
    # inner sum is at most twice its m=2 term (2 log p)^j/(2 p^2)
    tail = 2.0 * 2**j / 2.0 * integral_tail(j, P)
    val = math.fsum(parts)
    return Certified(val, tail + 8 * _EPS * abs(val) + 1e-300)


def continuation_value(j: int, y: float, tail_cut: float | None = None, tol: float | None = None) -> Certified:
    """D_s^j E(s) at s=1, where E(s) = sum_{p>y} 1/(p^s-1) - log zeta(s) + 1.

    Evaluated through its convergent rearrangement over p <= y, p > y and
    prime powers. Without ``tail_cut`` the default cut is doubled until the
    radius meets ``tol``.

    Raises:
        ToleranceError: the radius exceeds ``tol`` at the largest cut tried.
    """
    _check_y(y)
    if j < 0 or j > 8:
        raise ValueError("j must be in 0..8")
    auto = tail_cut is None
    P = float(default_tail_cut(y) if auto else tail_cut)
    if P < y:
        raise ValueError("tail_cut must be >= y")
    while True:
        res = _continuation_at(j, float(y), P)
        if tol is None or res.radius <= tol:
            return res
        if not auto or 2 * P > MAX_TAIL_CUT:
            raise ToleranceError(f"radius {res.radius:.3e} above tolerance {tol:.3e} at tail_cut={P:.3g}", res.radius)
        P *= 2


@lru_cache(maxsize=256)
def _continuation_at(j: int, y: float, P: float) -> Certified:
    small, lsmall = _prime_arrays(1.0, y)
    head = -_fsum((-lsmall) ** j / small)
    p, lp = _prime_arrays(y, P)
    v = 1.0 / (p - 1)
    inner = 1.0 / (p * (p - 1))
    coeff_sum = 1.0
    for k in range(2, j + 2):
        inner = inner + t_coeff(j, k) * v**k
        coeff_sum += t_coeff(j, k)
    mid = _fsum((-lp) ** j * inner)
    B = prime_power_constant(j, P)
    val = math.fsum([head, mid, -B.value, 1.0 if j == 0 else 0.0])
    rounding = 8 * _EPS * (abs(head) + abs(mid) + abs(B.value) + 1.0)
    return Certified(val, _tail_certificate(j, coeff_sum, P) + B.radius + rounding)


@lru_cache(maxsize=256)
def _inner_term(r: int, j: int, y: float, P: float) -> Certified:
    """D_s^j R_r at s=1 with R_r = 1 + (-1)^r sum_{p>y} v^(r+1), r >= 1."""
    p, lp = _prime_arrays(y, P)
    v = 1.0 / (p - 1)
    c = _v_power_coeffs(r + 1, j)
    s = _fsum((-lp) ** j * sum(a * v**k for k, a in enumerate(c) if a))
    tail = _tail_certificate(j, float(sum(c)), P)
    val = (-1) ** r * s + (1.0 if j == 0 else 0.0)
    return Certified(val, tail + 8 * _EPS * (abs(s) + 1.0))


@lru_cache(maxsize=64)
def _G_table(y: float, max_i: int, max_n: int, P: float) -> tuple[tuple[Certified, ...], ...]:
    g0 = tuple(Certified(g) for g in _g_derivs(y, max_n))
    E = [_continuation_at(j, y, P) for j in range(max_n + 1)]
    rows = [g0]
    for i in range(1, max_i + 1):
        row = []
        for n in range(max_n + 1):
            acc = Certified(0.0)
            for j in range(n + 1):
                c = comb(n, j)
                acc = acc + c * E[j] * rows[i - 1][n - j]
                for ip in range(i - 1):
                    r = i - 1 - ip
                    acc = acc + c * comb(i - 1, ip) * factorial(r) * _inner_term(r, j, y, P) * rows[ip][n - j]
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def G_deriv(N: int, i: int, y: float, tail_cut: float | None = None) -> Certified:
    """D_s^N G_i(1, y, -1) from the z-recursion at z=-1 and Leibniz in s."""
    _check_y(y)
    if not (0 <= i <= 4 and 0 <= N <= 6):
        raise ValueError("need 0 <= i <= 4 and 0 <= N <= 6")
    P = float(default_tail_cut(y) if tail_cut is None else tail_cut)
    if P < y:
        raise ValueError("tail_cut must be >= y")
    return _G_table(float(y), i, N, P)[i][N]


def G_table(y: float, max_i: int, max_n: int, tail_cut: float | None = None) -> list[list[Certified]]:
    """All D_s^n G_i(1, y, -1) for i <= max_i, n <= max_n."""
    _check_y(y)
    P = float(default_tail_cut(y) if tail_cut is None else tail_cut)
    return [list(r) for r in _G_table(float(y), max_i, max_n, P)]


# ---------------------------------------------------------------------------
# profile and fits


@dataclass
class PrimeSumProfile:
    y: float
    mertens_M: list[float]
    mertens_Q: list[float]
    cont: list[float]
    g_derivs: list[list[float]]
    tail_bounds: list[float]
    g_radii: list[list[float]] = field(default_factory=list)


def profile(y: float, max_n: int = 4, max_i: int = 2, tail_cut: float | None = None) -> PrimeSumProfile:
    _check_y(y)
    P = float(default_tail_cut(y) if tail_cut is None else tail_cut)
    cont = [continuation_value(j, y, P) for j in range(max_n + 1)]
    G = G_table(y, max_i, max_n, P)
    return PrimeSumProfile(
        y=float(y),
        mertens_M=[mertens_sum("M", n, y) for n in range(max_n + 1)],
        mertens_Q=[mertens_sum("Q", n, y) for n in range(max_n + 1)],
        cont=[c.value for c in cont],
        g_derivs=[[c.value for c in row] for row in G],
        tail_bounds=[c.radius for c in cont],
        g_radii=[[c.radius for c in row] for row in G],
    )


@dataclass
class FitResult:
    degree: int
    basis: str
    coeffs: np.ndarray  # columns ordered as in `columns`
    columns: list[tuple[int, int]]  # (power of log y, power of log log y)
    ys: np.ndarray
    residuals: np.ndarray

    def coefficient(self, n: int, j: int = 0) -> float:
        return float(self.coeffs[self.columns.index((n, j))])

    @property
    def leading(self) -> float:
        return self.coefficient(self.degree, 0)


class IllConditionedFit(ValueError):
    pass


def asymptotic_fit(ys, values, degree: int, basis: str = "poly_logy", loglog_degree: int = 1) -> FitResult:
    """Least squares of values against (log y)^n [(log log y)^j] for n <= degree."""
    ys = np.asarray(ys, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ys) != len(values):
        raise ValueError("ys and values differ in length")
    if len(ys) < degree + 3:
        raise ValueError(f"need at least {degree + 3} samples")
    if math.log10(ys.max() / ys.min()) < 3:
        raise IllConditionedFit("samples must span at least 3 decades of y; widen the y range")
    if basis == "poly_logy":
        cols = [(n, 0) for n in range(degree + 1)]
    elif basis == "poly_logy_times_loglog":
        cols = [(n, j) for n in range(degree + 1) for j in range(loglog_degree + 1)]
    else:
        raise ValueError(f"unknown basis {basis!r}")
    ly, lly = np.log(ys), np.log(np.log(ys))
    A = np.column_stack([ly**n * lly**j for n, j in cols])
    scale = np.abs(A).max(axis=0)
    As = A / scale
    if np.linalg.cond(As) > 1e12:
        raise IllConditionedFit("basis is ill-conditioned on these samples; widen the y range")
    sol, *_ = np.linalg.lstsq(As, values, rcond=None)
    coeffs = sol / scale
    return FitResult(degree, basis, coeffs, cols, ys, values - A @ coeffs)


# ---------------------------------------------------------------------------
# definition-based evaluation (oracle for the z-recursion)


def euler_product_g(y: float, z: float, P: float = 10**7) -> Certified:
    """g(1, y, z) = z^-1 prod_{p<=y}(1-1/p)^z prod_{p>y}(1+z/p)(1-1/p)^z.

    The product over p > y converges at s = 1 since each factor is
    1 + O(1/p^2). Primes above P are dropped; for |z| <= 1.5 each dropped
    log-factor is at most 3/p^2, so the log of the tail is below 3/P.
    """
    _check_y(y)
    if z == 0 or abs(z) > 1.5:
        raise ValueError("need 0 < |z| <= 1.5")
    small, _ = _prime_arrays(1.0, y)
    big, _ = _prime_arrays(y, P)
    log_g = math.fsum([z * _fsum(np.log1p(-1.0 / small)), _fsum(np.log1p(z / big) + z * np.log1p(-1.0 / big))])
    val = math.exp(log_g) / z
    return Certified(val, abs(val) * math.expm1(3.0 / P))
