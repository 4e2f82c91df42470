"""Truncated bivariate series in u = s-1 and L = log(1/(s-1)) and the
Selberg-Delange style main term for M_{k,omega}(x, y).

Near s = 1 the Dirichlet series of the sifted sum is

    (-1)^k/((k-1)! s zeta(s)) sum_l C(k-1, l) (L + Delta(s))^(k-1-l) G_l(s, y, -1)

with log zeta(s) = L + Delta(s). Expanding G_l in u gives coefficients
phi[i][j] of u^i L^j. Each u^i L^j term contributes, through the Hankel
contour and the substitution u = w/log x,

    x/(log x)^(i+1) sum_j' C(j, j') (log log x)^(j-j') (-1)^j' H(i, j')

where H(i, j') is the Hankel coefficient of w^i (log w)^j' e^w, i.e.
Gamma_{j', i-1}. The j' = 0 part vanishes since 1/Gamma(-n) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial
from typing import Sequence

import numpy as np

from .constants import EULER_GAMMA, gamma_mn_closed, stieltjes_const
from .exact_sums import mkw
from .primesums import FitResult, G_table, asymptotic_fit


@dataclass(frozen=True)
class BiSeries:
    """sum c[i, j] u^i L^j truncated at i <= I, j <= J."""

    coeff: np.ndarray

    @property
    def I(self) -> int:
        return self.coeff.shape[0] - 1

    @property
    def J(self) -> int:
        return self.coeff.shape[1] - 1

    @staticmethod
    def zeros(I: int, J: int = 0) -> "BiSeries":
        return BiSeries(np.zeros((I + 1, J + 1)))

    @staticmethod
    def const(c: float, I: int, J: int = 0) -> "BiSeries":
        s = BiSeries.zeros(I, J)
        s.coeff[0, 0] = c
        return s

    @staticmethod
    def u(I: int, J: int = 0) -> "BiSeries":
        s = BiSeries.zeros(I, J)
        if I >= 1:
            s.coeff[1, 0] = 1.0
        return s

    @staticmethod
    def L(I: int, J: int) -> "BiSeries":
        s = BiSeries.zeros(I, J)
        s.coeff[0, 1] = 1.0
        return s

    def _shape_like(self, other: "BiSeries") -> tuple[np.ndarray, np.ndarray]:
        I, J = min(self.I, other.I), max(self.J, other.J)
        a = np.zeros((I + 1, J + 1))
        b = np.zeros((I + 1, J + 1))
        a[:, : self.J + 1] = self.coeff[: I + 1]
        b[:, : other.J + 1] = other.coeff[: I + 1]
        return a, b

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.const(float(other), self.I, self.J)
        a, b = self._shape_like(other)
        return BiSeries(a + b)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(-self.coeff)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return BiSeries(self.coeff * float(other))
        I = min(self.I, other.I)
        J = self.J + other.J
        out = np.zeros((I + 1, J + 1))
        for i in range(I + 1):
            for i2 in range(I + 1 - i):
                out[i + i2] += np.convolve(self.coeff[i], other.coeff[i2])
        return BiSeries(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiSeries":
        if n < 0:
            raise ValueError("negative powers: use inverse()")
        out = BiSeries.const(1.0, self.I, 0)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, I: int) -> "BiSeries":
        return BiSeries(self.coeff[: I + 1].copy())

    def is_pure_u(self) -> bool:
        return not np.any(self.coeff[:, 1:])

    def _u_part(self, name: str) -> np.ndarray:
        if not self.is_pure_u():
            raise ValueError(f"{name} is only defined for series without L")
        return self.coeff[:, 0]

    def inverse(self) -> "BiSeries":
        a = self._u_part("inverse")
        if a[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for n in range(1, len(a)):
            b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
        return BiSeries(b[:, None])

    def log(self) -> "BiSeries":
        """log of a pure u-series with constant term 1."""
        a = self._u_part("log")
        if a[0] != 1.0:
            raise ValueError("log needs constant term 1")
        s = BiSeries(self.coeff.copy())
        s.coeff[0, 0] = 0.0
        out = BiSeries.zeros(self.I)
        power = BiSeries.const(1.0, self.I)
        for n in range(1, self.I + 1):
            power = power * s
            out = out + power * ((-1) ** (n + 1) / n)
        return out

    def exp(self) -> "BiSeries":
        """exp of a pure u-series with constant term 0."""
        a = self._u_part("exp")
        if a[0] != 0.0:
            raise ValueError("exp needs constant term 0")
        out = BiSeries.const(1.0, self.I)
        power = BiSeries.const(1.0, self.I)
        for n in range(1, self.I + 1):
            power = power * self
            out = out + power * (1.0 / factorial(n))
        return out

    def eval_u(self, u: float, L: float = 0.0) -> float:
        return float(sum(c * u**i * L**j for (i, j), c in np.ndenumerate(self.coeff)))


def _check_order(order: int) -> None:
    if not 0 <= order <= 8:
        raise ValueError("order must be in 0..8")


def zeta_series(order: int) -> BiSeries:
    """(s-1) zeta(s) = 1 + sum_{n>=0} (-1)^n gamma_n u^(n+1)/n!."""
    _check_order(order)
    c = np.zeros((order + 1, 1))
    c[0, 0] = 1.0
    for n in range(order):
        g = EULER_GAMMA if n == 0 else stieltjes_const(n)
        c[n + 1, 0] = (-1) ** n * g / factorial(n)
    return BiSeries(c)


def delta_series(order: int) -> BiSeries:
    """Delta(s) = log zeta(s) - log(1/(s-1)) = log((s-1) zeta(s))."""
    return zeta_series(order).log()


def inv_s_zeta_series(order: int) -> BiSeries:
    """1/(s zeta(s)) = u / ((1+u) (s-1) zeta(s))."""
    _check_order(order)
    one_plus_u = BiSeries.const(1.0, order) + BiSeries.u(order)
    return BiSeries.u(order) * (one_plus_u * zeta_series(order)).inverse()


@dataclass
class PhiTable:
    y: float
    k: int
    values: np.ndarray  # [i, j], 0 <= i <= N', 0 <= j <= k-1
    radii: np.ndarray

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if j >= self.values.shape[1]:
            return 0.0
        return float(self.values[i, j])


def _assembly_series(k: int, Nprime: int) -> list[BiSeries]:
    """A_l with phi = sum_l sum_n A_l[i-n] * D^n G_l/n!."""
    base = (-1) ** k / factorial(k - 1) * inv_s_zeta_series(Nprime)
    LD = BiSeries.L(Nprime, 1) + delta_series(Nprime)
    return [comb(k - 1, l) * base * LD ** (k - 1 - l) for l in range(k)]


def phi_table(y: float, k: int, Nprime: int, tail_cut: float | None = None) -> PhiTable:
    """Coefficients phi[i][j] of u^i L^j in the expansion around s = 1."""
    if not (1 <= k <= 4 and 1 <= Nprime <= 6):
        raise ValueError("need 1 <= k <= 4 and 1 <= Nprime <= 6")
    G = G_table(y, k - 1, Nprime, tail_cut)
    vals = np.zeros((Nprime + 1, k))
    rad = np.zeros((Nprime + 1, k))
    for l, A in enumerate(_assembly_series(k, Nprime)):
        a = np.zeros((Nprime + 1, k))
        a[:, : A.J + 1] = A.coeff[: Nprime + 1, :k]
        for n in range(Nprime + 1):
            g = G[l][n]
            shifted = np.zeros_like(a)
            shifted[n:] = a[: Nprime + 1 - n]
            vals += shifted * g.value / factorial(n)
            rad += np.abs(shifted) * g.radius / factorial(n)
    return PhiTable(float(y), k, vals, rad)


def phi_fit(k: int, i: int, J: int, ys: Sequence[float], degree: int, loglog_degree: int = 0) -> FitResult:
    """Fit phi[i][J](y) over a y-grid against (log y)^n (log log y)^m.

    There is no closed form for the coefficients, so they are recovered by
    least squares; ``loglog_degree`` > 0 adds the (log log y)^m columns.
    """
    vals = [phi_table(y, k, max(i, 1))[i, J] for y in ys]
    basis = "poly_logy_times_loglog" if loglog_degree else "poly_logy"
    return asymptotic_fit(ys, vals, degree, basis, loglog_degree)


def hankel_H(i: int, j: int) -> float:
    """(1/2 pi i) int_H w^i (log w)^j e^w dw = Gamma_{j, i-1}."""
    if i < 1 or j < 0:
        raise ValueError("need i >= 1, j >= 0")
    return gamma_mn_closed(j, i - 1)


@dataclass(frozen=True)
class MainTermParams:
    x: float
    y: float
    k: int
    N: int

    def __post_init__(self):
        if self.y < 1.9 or self.x < 100 or self.k < 1 or not 1 <= self.N <= 4:
            raise ValueError("need y >= 1.9, x >= 100, k >= 1 and 1 <= N <= 4")


def main_term(params: MainTermParams, phi: PhiTable | None = None) -> float:
    """Main term of M_{k,omega}(x, y) truncated at (log x)^-(N+1)."""
    x, k, N = params.x, params.k, params.N
    if k == 1:
        return 0.0
    if phi is None:
        phi = phi_table(params.y, k, N + 2)
    lx = math.log(x)
    llx = math.log(lx)
    terms = []
    for i in range(1, N + 1):
        for J in range(1, k):
            for j in range(1, J + 1):
                terms.append(phi[i, J] * (-1) ** j * comb(J, j) * llx ** (J - j) * hankel_H(i, j) / lx**i)
    return x / lx * math.fsum(terms)


@dataclass(frozen=True)
class Window:
    Y0: float = 1.0
    power: float = 1.0
    epsilon: float = 0.5

    def bound(self, x: float, k: int) -> float:
        lx = math.log(x)
        a = self.Y0 * math.exp(self.power * lx / math.log(math.log(x + 1)) ** (1 + self.epsilon))
        return min(a, x ** (1.0 / k))


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class CompareRow:
    x: int
    exact: int
    main: float
    normalized_residual: float


def compare(x_grid: Sequence[int], y: float, k: int, N: int, window: Window = Window()) -> list[CompareRow]:
    """Exact sums against the main term with the residual scaled by its expected size."""
    for x in x_grid:
        b = window.bound(x, k)
        if y > b:
            raise WindowError(f"y={y} exceeds the admissible bound {b:.6g} at x={x}")
    phi = phi_table(y, k, N + 2) if k > 1 else None
    rows = []
    for x in x_grid:
        ex = mkw(int(x), y, k)
        mt = main_term(MainTermParams(float(x), y, k, N), phi)
        lx = math.log(x)
        scale = x * math.log(math.log(x + 1)) ** (k - 1) * (math.log(y) / lx) ** (N + 1) / lx
        rows.append(CompareRow(int(x), ex, mt, abs(ex - mt) / scale))
    return rows
