"""Exact sifted Moebius sums

    M_{k,omega}(x, y) = sum_{n<=x, p_1(n)>y} mu(n) binom(omega(n)-1, k-1),

the duality identities relating sums over divisors to the k-th largest and
k-th smallest prime factor, residue-class reciprocal series and the
empirical upper-bound ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Callable, Optional

import numpy as np

from .combinatorics import binom
from .sieve import HARD_CEILING, INFINITY_MARK, FactorTable, build_table, factor_table

PrimeFn = Callable[[int], int]
_MAX_OMEGA = 16


@dataclass(frozen=True)
class SumRequest:
    x: int
    y: float
    k: int
    residue: Optional[tuple[int, int]] = None  # (m, l)

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.residue is not None:
            m, l = self.residue
            if m < 1 or gcd(l, m) != 1:
                raise ValueError(f"need gcd(l, m) = 1, got l={l}, m={m}")


def _weights(k: int) -> np.ndarray:
    # binom(omega-1, k-1) indexed by omega; omega=0 is n=1
    return np.array([binom(w - 1, k - 1) for w in range(_MAX_OMEGA + 1)], dtype=np.int64)


def _segment_sum(t: FactorTable, req: SumRequest) -> int:
    mask = (t.mu != 0) & (t.lpf > req.y)
    if req.residue is not None:
        m, l = req.residue
        # n = 1 has p_1 = infinity, which lies in no residue class
        mask &= (t.lpf % m == l % m) & (t.lpf != INFINITY_MARK)
    w = _weights(req.k)[t.omega[mask]]
    terms = t.mu[mask].astype(np.int64) * w
    total = int(terms.sum(dtype=np.int64))
    if abs(total) > int(np.abs(terms).sum(dtype=np.int64)):
        raise OverflowError("int64 accumulation overflowed")
    return total


def mkw_exact(req: SumRequest, ceiling: int = HARD_CEILING, segment: Optional[int] = None, cache_dir=None) -> int:
    """M_{k,omega}(x, y), with n = 1 counted through binom(-1, k-1).

    ``segment`` forces a fresh segmented build with that segment length;
    the default reuses the (cached) table for [1, x].
    """
    if req.x > ceiling:
        raise ValueError(f"x={req.x} exceeds the sieve ceiling {ceiling}")
    if segment is None:
        return _segment_sum(factor_table(req.x, cache_dir), req)
    return sum(
        _segment_sum(build_table(lo, min(lo + segment, req.x + 1)), req) for lo in range(1, req.x + 1, segment)
    )


def mkw(x: int, y: float, k: int, **kw) -> int:
    return mkw_exact(SumRequest(int(x), float(y), int(k)), **kw)


def mertens_function(x: int) -> int:
    t = factor_table(x)
    return int(t.mu.astype(np.int64).sum())


# ---------------------------------------------------------------------------
# duality


def _grouped_coeffs(k: int, size: int) -> list[int]:
    # c[r] = sum_t C(r, t) (-1)^(t+1) binom(t, k-1): all squarefree divisors
    # that contain a fixed prime q and t of the r primes on one side of q
    return [sum(comb(r, t) * (-1) ** (t + 1) * binom(t, k - 1) for t in range(r + 1)) for r in range(size)]


def _f0(f: PrimeFn, p: Optional[int]) -> int:
    return 0 if p is None or p == INFINITY_MARK else f(p)


def duality_sides(primes: list[int], k: int, f: PrimeFn, brute: bool = False) -> tuple[int, int, int, int]:
    """(lhs_smallest, rhs_smallest, lhs_largest, rhs_largest) for n with these distinct primes.

    The first pair is sum_{d|n} mu(d) binom(omega(d)-1, k-1) f(p_1(d)) against
    (-1)^k f(P_k(n)); the second uses P_1(d) against (-1)^k f(p_k(n)).
    """
    qs = sorted(primes)
    w = len(qs)
    sign = (-1) ** k
    rhs1 = sign * _f0(f, qs[-k] if w >= k else None)
    rhs2 = sign * _f0(f, qs[k - 1] if w >= k else None)
    if brute:
        lhs1 = lhs2 = 0
        for r in range(1, w + 1):
            c = (-1) ** r * binom(r - 1, k - 1)
            if c == 0:
                continue
            for sub in combinations(qs, r):
                lhs1 += c * f(sub[0])
                lhs2 += c * f(sub[-1])
        return lhs1, rhs1, lhs2, rhs2
    c = _grouped_coeffs(k, w)
    vals = [f(q) for q in qs]
    lhs1 = sum(vals[i] * c[w - 1 - i] for i in range(w))
    lhs2 = sum(vals[i] * c[i] for i in range(w))
    return lhs1, rhs1, lhs2, rhs2


def _distinct_from_table(t: FactorTable, n: int) -> list[int]:
    out = []
    while n > 1:
        p = int(t.lpf[n - t.lo])
        out.append(p)
        while n % p == 0:
            n //= p
    return out


def duality_check(n: int, k: int, f: PrimeFn, brute: bool = False) -> tuple[bool, bool]:
    """Both duality relations for a single n; f(infinity) is taken as 0."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    t = factor_table(max(n, 2))
    l1, r1, l2, r2 = duality_sides(_distinct_from_table(t, n), k, f, brute)
    return l1 == r1, l2 == r2


def duality_scan(max_n: int, ks, fs: dict[str, PrimeFn]) -> list[tuple[int, int, str, int]]:
    """All violations (n, k, f name, relation index) for 1 <= n <= max_n."""
    t = factor_table(max(max_n, 2))
    bad = []
    for n in range(1, max_n + 1):
        ps = _distinct_from_table(t, n)
        for k in ks:
            for name, f in fs.items():
                l1, r1, l2, r2 = duality_sides(ps, k, f)
                if l1 != r1:
                    bad.append((n, k, name, 1))
                if l2 != r2:
                    bad.append((n, k, name, 2))
    return bad


FIXTURE_FUNCTIONS: dict[str, PrimeFn] = {
    "identity": lambda p: p,
    "floor_log": lambda p: int(math.floor(math.log(p))),
    "one_mod_4": lambda p: 1 if p % 4 == 1 else 0,
}


# ---------------------------------------------------------------------------
# residue series and ratios


def residue_series_partial(m: int, l: int, x: int, k: int) -> float:
    """sum_{1<n<=x, p_1(n) = l mod m} mu(n) binom(omega(n)-1, k-1)/n."""
    if m < 1 or gcd(l, m) != 1:
        raise ValueError(f"need gcd(l, m) = 1, got l={l}, m={m}")
    t = factor_table(x)
    n = t.numbers()
    mask = (t.mu != 0) & (n > 1) & (t.lpf % m == l % m)
    w = _weights(k)[t.omega[mask]] * t.mu[mask]
    keep = w != 0
    return math.fsum((w[keep] / n[mask][keep].astype(float)).tolist())


def residue_series_exact(m: int, l: int, x: int, k: int) -> Fraction:
    """Rational version of residue_series_partial for small x (oracle use)."""
    t = factor_table(x)
    acc = Fraction(0)
    for n in range(2, x + 1):
        mu, om, p = t.at(n)
        if mu and p % m == l % m:
            acc += Fraction(mu * binom(om - 1, k - 1), n)
    return acc


def upper_bound_ratio(x: int, y: float, k: int) -> float:
    """|M_{k,omega}(x,y)| / (x log y (log log(x+1))^(k-1))."""
    if not 1.9 <= y <= x ** (1.0 / k):
        raise ValueError(f"y={y} outside [1.9, x^(1/k)={x ** (1.0 / k):.6g}]")
    val = mkw(x, y, k)
    return abs(val) / (x * math.log(y) * math.log(math.log(x + 1)) ** (k - 1))
