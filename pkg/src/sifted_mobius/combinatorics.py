"""Exact integer combinatorics: Stirling numbers, Bell polynomials, Fubini numbers."""

from __future__ import annotations

import csv
import io
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

MAX_N = 64


def binom(a: int, b: int) -> int:
    """Binomial coefficient with the combinatorial convention.

    binom(a, b) = 0 for 0 <= a < b, binom(-1, 0) = 1 and binom(-1, b) = 0 for
    b >= 1. The last two cases are what omega(1) - 1 = -1 produces.
    """
    if b < 0:
        return 0
    if a >= 0:
        return comb(a, b)
    if a == -1:
        return 1 if b == 0 else 0
    raise ValueError(f"binom({a}, {b}) is outside the supported range")


def _check(n: int, k: int, lo_k: int = 0) -> None:
    if not (0 <= n <= MAX_N) or not (lo_k <= k <= n):
        raise ValueError(f"index ({n}, {k}) out of range (0 <= k <= n <= {MAX_N})")


@lru_cache(maxsize=None)
def _s2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _s2_row(n - 1) + (0,)
    return tuple((k * prev[k] if k else 0) + (prev[k - 1] if k else 0) for k in range(n + 1))


@lru_cache(maxsize=None)
def _c1_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _c1_row(n - 1) + (0,)
    return tuple(((n - 1) * prev[k]) + (prev[k - 1] if k else 0) for k in range(n + 1))


def stirling2(n: int, k: int) -> int:
    """S(n, k): partitions of an n-set into k nonempty blocks."""
    _check(n, k)
    return _s2_row(n)[k]


def stirling1_unsigned(m: int, n: int) -> int:
    """c(m, n): permutations of an m-set with exactly n cycles."""
    _check(m, n)
    return _c1_row(m)[n]


def bell_complete(j: int, args: Sequence[float]) -> float:
    """Complete exponential Bell polynomial Y_j(x_1, ..., x_j).

    Uses Y_{n+1} = sum_i C(n, i) Y_{n-i} x_{i+1}. Works for any numeric
    type supporting + and * (ints and Fractions stay exact).
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    if len(args) < j:
        raise ValueError(f"Y_{j} needs {j} arguments, got {len(args)}")
    ys = [1]
    for n in range(j):
        ys.append(sum(comb(n, i) * ys[n - i] * args[i] for i in range(n + 1)))
    return ys[j]


def t_coeff(j: int, k: int) -> int:
    """T_{j,k} = (k-1)! S(j+1, k), the coefficients of -(d/ds)^j log p/(p^s-1)."""
    if j < 0 or not (1 <= k <= j + 1):
        raise ValueError(f"T_({j},{k}) needs 1 <= k <= j+1")
    return factorial(k - 1) * stirling2(j + 1, k)


def t_row_sum(j: int) -> int:
    """sum_k T_{j,k}; used as the multiplier in tail certificates."""
    return sum(t_coeff(j, k) for k in range(1, j + 2))


def fubini(n: int) -> int:
    """Ordered Bell (Fubini) number: sum_k k! S(n, k)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(factorial(k) * stirling2(n, k) for k in range(n + 1))


def falling_factorial_derivative(N: int, k: int) -> int:
    """(d/dz)^k z(z-1)...(z-N) at z = N+1.

    Equals k! * c(N+2, k+1), since z(z-1)...(z-N) at z = N+1+t is
    prod_{i=1}^{N+1} (t+i) = sum_k c(N+2, k+1) t^k.
    """
    if N < 0 or k < 0:
        raise ValueError("need N, k >= 0")
    if k > N + 1:
        return 0
    return factorial(k) * stirling1_unsigned(N + 2, k + 1)


def dump_csv(max_n: int = 10) -> str:
    """CSV of S(n,k), c(n,k), T_{n,k} and Fubini numbers for n <= max_n."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "n", "k", "value"])
    for n in range(max_n + 1):
        for k in range(n + 1):
            w.writerow(["stirling2", n, k, stirling2(n, k)])
    for n in range(max_n + 1):
        for k in range(n + 1):
            w.writerow(["stirling1_unsigned", n, k, stirling1_unsigned(n, k)])
    for j in range(max_n):
        for k in range(1, j + 2):
            w.writerow(["t_coeff", j, k, t_coeff(j, k)])
    for n in range(max_n + 1):
        w.writerow(["fubini", n, "", fubini(n)])
    return buf.getvalue()
