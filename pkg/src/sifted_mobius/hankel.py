"""Truncated Hankel contour integrals

    (1/2 pi i) \\int log(w)^m w^(N+1) e^w dw

over the contour made of the right unit semicircle around 0 joined to two
horizontal arms at Im w = -1 and Im w = +1 running left to Re w = -X.
As X -> infinity the value tends to Gamma_{m,N}; the truncation error decays
like X^(N+2) e^(-X) up to powers of log X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .constants import ConvergenceError, gamma_mn_closed

PANEL = 0.5
Branch = Literal["principal", "modulus"]


@dataclass(frozen=True)
class HankelContourSpec:
    cutoff: float
    arm_height: float = 1.0
    arc_radius: float = 1.0
    nodes_per_unit: int = 16
    max_nodes_per_unit: int = 256
    rtol: float = 1e-13

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.arm_height != 1.0 or self.arc_radius != 1.0:
            raise ValueError("only the unit arc/arm geometry is supported")


@lru_cache(maxsize=None)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _panels(a: float, b: float, per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on [a, b] with panels <= PANEL wide."""
    count = max(1, math.ceil(abs(b - a) / PANEL - 1e-12))
    edges = np.linspace(a, b, count + 1)
    x, w = _gauss(per_panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _contour(cutoff: float, per_panel: int, upper_only: bool = False):
    """Yield (w, dw) arrays for each piece, oriented counter-clockwise."""
    X = float(cutoff)
    pieces = []
    if not upper_only:
        u, wt = _panels(-X, 0.0, per_panel)
        pieces.append((u - 1j, wt.astype(complex)))
    theta0 = 0.0 if upper_only else -math.pi / 2
    th, wt = _panels(theta0, math.pi / 2, per_panel)
    w = np.exp(1j * th)
    pieces.append((w, 1j * w * wt))
    u, wt = _panels(-X, 0.0, per_panel)
    # upper arm runs from +i leftwards to -X + i
    pieces.append((u + 1j, -wt.astype(complex)))
    return pieces


def _integrand(w: np.ndarray, m: int, npow: int, branch: Branch) -> np.ndarray:
    if branch == "principal":
        lg = np.log(w)
    elif branch == "modulus":
        lg = np.log(np.abs(w)).astype(complex)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return lg**m * w ** (npow + 1) * np.exp(w)


def _assemble(m: int, npow: int, cutoff: float, per_panel: int, branch: Branch, upper_only: bool) -> complex:
    parts = [np.sum(_integrand(w, m, npow, branch) * dw) for w, dw in _contour(cutoff, per_panel, upper_only)]
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)) / (2j * math.pi)


def _refine(m: int, npow: int, spec: HankelContourSpec, branch: Branch, upper_only: bool) -> complex:
    n = max(2, int(spec.nodes_per_unit * PANEL))
    limit = int(spec.max_nodes_per_unit * PANEL)
    prev = cur = _assemble(m, npow, spec.cutoff, n, branch, upper_only)
    while 2 * n <= limit:
        n *= 2
        prev, cur = cur, _assemble(m, npow, spec.cutoff, n, branch, upper_only)
        if abs(cur - prev) <= spec.rtol * max(1.0, abs(cur)):
            return cur
    raise ConvergenceError(f"Hankel quadrature did not settle: last iterates {prev!r}, {cur!r}")


def hankel_integral(m: int, Npow: int, spec: HankelContourSpec, branch: Branch = "principal") -> float:
    """(1/2 pi i) times the contour integral of log(w)^m w^(Npow+1) e^w.

    ``branch="modulus"`` replaces log w by log|w| on the whole contour; it
    exists only to demonstrate that the monodromy across the cut matters.

    Raises:
        ConvergenceError: node doubling fails to settle, or the assembled
            value keeps an imaginary part above 1e-9.
    """
    if m < 0 or Npow < 0:
        raise ValueError("need m >= 0 and Npow >= 0")
    val = _refine(m, Npow, spec, branch, upper_only=False)
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ConvergenceError(f"imaginary part {val.imag:.3e} did not cancel")
    return val.real


def hankel_upper_half(m: int, Npow: int, spec: HankelContourSpec) -> float:
    """Same quantity from the upper half contour only: 2 Re of its share."""
    return 2.0 * _refine(m, Npow, spec, "principal", upper_only=True).real


def truncation_decay_scan(m: int, Npow: int, cutoffs: Sequence[float]) -> list[tuple[float, float, float]]:
    """Rows (X, value, |value - Gamma_{m,Npow}|) for ascending cutoffs X."""
    xs = list(cutoffs)
    if len(xs) < 3 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("cutoffs must be ascending with at least 3 entries")
    ref = gamma_mn_closed(m, Npow)
    rows = []
    for X in xs:
        v = hankel_integral(m, Npow, HankelContourSpec(cutoff=float(X)))
        rows.append((float(X), v, abs(v - ref)))
    return rows
