"""Segmented least-prime-factor sieve.

Produces mu(n), omega(n) and the least prime factor for every n in a
half-open range [lo, hi), plus prime enumeration. Everything else in the
package sums over these arrays.

Binary cache layout (little-endian)::

    b"ADLSIEVE" | version u32 | lo u64 | hi u64
    mu     packed 2 bits/entry (0 -> 00, +1 -> 01, -1 -> 11)
    omega  u8 per entry
    lpf    u64 per entry
    sha256 digest of everything above (32 bytes)
"""

from __future__ import annotations

import hashlib
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Iterable, Literal, Optional

import numpy as np

INFINITY_MARK = int(np.iinfo(np.int64).max)
DEFAULT_SEGMENT = 1 << 20
HARD_CEILING = 10**9

CACHE_MAGIC = b"ADLSIEVE"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sIQQ")


class InsufficientBaseError(ValueError):
    """The base prime list does not reach sqrt(hi - 1)."""


class CacheError(RuntimeError):
    """A sieve cache file is unreadable or fails its checksum."""


@dataclass(frozen=True)
class PrimeList:
    bound: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def upto(self, y: float) -> np.ndarray:
        """Primes p <= y (y may be smaller than ``bound``)."""
        return self.primes[: int(np.searchsorted(self.primes, np.floor(y), side="right"))]


@dataclass(frozen=True)
class FactorTable:
    """mu, omega and least prime factor for lo <= n < hi.

    ``lpf[n - lo]`` is INFINITY_MARK for n = 1.
    """

    lo: int
    hi: int
    mu: np.ndarray
    omega: np.ndarray
    lpf: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo

    def numbers(self) -> np.ndarray:
        return np.arange(self.lo, self.hi, dtype=np.int64)

    def window(self, lo: int, hi: int) -> "FactorTable":
        """Sub-table for [lo, hi); shares memory with this table."""
        if not (self.lo <= lo <= hi <= self.hi):
            raise ValueError(f"[{lo}, {hi}) is not inside [{self.lo}, {self.hi})")
        a, b = lo - self.lo, hi - self.lo
        return FactorTable(lo, hi, self.mu[a:b], self.omega[a:b], self.lpf[a:b])

    def at(self, n: int) -> tuple[int, int, int]:
        i = n - self.lo
        return int(self.mu[i]), int(self.omega[i]), int(self.lpf[i])

    def same_as(self, other: "FactorTable") -> bool:
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and np.array_equal(self.mu, other.mu)
            and np.array_equal(self.omega, other.omega)
            and np.array_equal(self.lpf, other.lpf)
        )

    @staticmethod
    def concat(parts: Iterable["FactorTable"]) -> "FactorTable":
        parts = sorted(parts, key=lambda t: t.lo)
        for a, b in zip(parts, parts[1:]):
            if a.hi != b.lo:
                raise ValueError(f"segments [{a.lo},{a.hi}) and [{b.lo},{b.hi}) are not contiguous")
        return FactorTable(
            parts[0].lo,
            parts[-1].hi,
            np.concatenate([t.mu for t in parts]),
            np.concatenate([t.omega for t in parts]),
            np.concatenate([t.lpf for t in parts]),
        )


# ---------------------------------------------------------------------------
# primes


def _small_primes(n: int) -> np.ndarray:
    """Plain Eratosthenes for n <= ~10^7; used for base primes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


_prime_cache: Optional[PrimeList] = None


def primes_up_to(y: float, segment: int = 1 << 22) -> PrimeList:
    """All primes p <= y, ascending.

    Results are memoised: a request below the largest bound computed so far
    is served by slicing.
    """
    global _prime_cache
    if y < 0:
        raise ValueError("y must be nonnegative")
    bound = int(np.floor(y))
    cached = _prime_cache
    if cached is not None and bound <= cached.bound:
        return PrimeList(bound, cached.upto(bound))

    base = _small_primes(isqrt(bound))
    if bound <= 1 << 23:
        primes = _small_primes(bound)
    else:
        chunks = [base]
        lo = int(base[-1]) + 1 if len(base) else 2
        while lo <= bound:
            hi = min(lo + segment, bound + 1)
            flags = np.ones(hi - lo, dtype=bool)
            for p in base.tolist():
                if p * p >= hi:
                    break
                start = max(p * p, -(-lo // p) * p)
                flags[start - lo :: p] = False
            chunks.append(np.flatnonzero(flags).astype(np.int64) + lo)
            lo = hi
        primes = np.concatenate(chunks)
    result = PrimeList(bound, primes)
    _prime_cache = result
    return result


# ---------------------------------------------------------------------------
# factor tables


def build_segment(lo: int, hi: int, base: PrimeList) -> FactorTable:
    """Sieve mu, omega and lpf over [lo, hi).

    Raises:
        InsufficientBaseError: ``base`` stops short of sqrt(hi - 1).
    """
    if not (1 <= lo < hi):
        raise ValueError(f"need 1 <= lo < hi, got lo={lo}, hi={hi}")
    need = isqrt(hi - 1)
    if base.bound < need:
        raise InsufficientBaseError(
            f"base primes reach {base.bound}; segment [{lo}, {hi}) needs all primes <= {need}"
        )
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    mu = np.ones(size, dtype=np.int8)
    omega = np.zeros(size, dtype=np.uint8)
    lpf = np.zeros(size, dtype=np.int64)

    for p in base.upto(need).tolist():
        start = (-lo) % p
        if start >= size:
            continue
        sl = slice(start, None, p)
        omega[sl] += 1
        mu[sl] = -mu[sl]
        rem[sl] //= p
        view = lpf[sl]
        view[view == 0] = p
        pk = p * p
        if pk < hi:
            mu[(-lo) % pk :: pk] = 0
        while pk < hi:
            rem[(-lo) % pk :: pk] //= p
            pk *= p

    # whatever survives is a single prime above sqrt(hi - 1)
    big = rem > 1
    omega[big] += 1
    mu[big] = -mu[big]
    unset = lpf == 0
    lpf[unset & big] = rem[unset & big]
    if lo == 1:
        lpf[0] = INFINITY_MARK
    return FactorTable(lo, hi, mu, omega, lpf)


def build_table(
    lo: int,
    hi: int,
    segment: int = DEFAULT_SEGMENT,
    workers: int = 1,
) -> FactorTable:
    """Factor table for [lo, hi) assembled from independent segments."""
    if hi > HARD_CEILING + 1:
        raise ValueError(f"sieving beyond {HARD_CEILING} is not supported")
    base = primes_up_to(isqrt(hi - 1))
    bounds = [(a, min(a + segment, hi)) for a in range(lo, hi, segment)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: build_segment(ab[0], ab[1], base), bounds))
    else:
        parts = [build_segment(a, b, base) for a, b in bounds]
    return parts[0] if len(parts) == 1 else FactorTable.concat(parts)


# ---------------------------------------------------------------------------
# binary cache


def _pack_mu(mu: np.ndarray) -> bytes:
    codes = np.where(mu < 0, 3, mu).astype(np.uint8)
    pad = (-len(codes)) % 4
    codes = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 4)
    packed = codes[:, 0] | (codes[:, 1] << 2) | (codes[:, 2] << 4) | (codes[:, 3] << 6)
    return packed.astype(np.uint8).tobytes()


def _unpack_mu(buf: bytes, n: int) -> np.ndarray:
    packed = np.frombuffer(buf, dtype=np.uint8)
    codes = np.stack([(packed >> s) & 3 for s in (0, 2, 4, 6)], axis=1).reshape(-1)[:n]
    mu = codes.astype(np.int8)
    mu[codes == 3] = -1
    return mu


def save_table(path: os.PathLike, table: FactorTable) -> None:
    n = len(table)
    body = b"".join(
        [
            _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.lo, table.hi),
            _pack_mu(table.mu),
            table.omega.astype("<u1").tobytes(),
            table.lpf.astype("<u8").tobytes(),
        ]
    )
    assert len(body) == _HEADER.size + (n + 3) // 4 + n + 8 * n
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(body + hashlib.sha256(body).digest())
    os.replace(tmp, path)


def load_table(path: os.PathLike) -> FactorTable:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size + 32:
        raise CacheError(f"sieve cache {path} is truncated")
    body, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheError(f"sieve cache {path} failed its checksum")
    magic, version, lo, hi = _HEADER.unpack_from(body)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise CacheError(f"sieve cache {path} has bad magic/version")
    n = hi - lo
    off = _HEADER.size
    mu_len = (n + 3) // 4
    if len(body) != off + mu_len + 9 * n:
        raise CacheError(f"sieve cache {path} has inconsistent length")
    mu = _unpack_mu(body[off : off + mu_len], n)
    off += mu_len
    omega = np.frombuffer(body, dtype="<u1", count=n, offset=off).copy()
    off += n
    lpf = np.frombuffer(body, dtype="<u8", count=n, offset=off).astype(np.int64)
    return FactorTable(lo, hi, mu, omega, lpf)


def cache_path(cache_dir: os.PathLike, lo: int, hi: int) -> Path:
    return Path(cache_dir) / f"sieve_{lo}_{hi}.adl"


_table_cache: Optional[FactorTable] = None
_default_cache_dir: Optional[Path] = None


def set_cache_dir(path: Optional[os.PathLike]) -> None:
    """Directory used by factor_table when no cache_dir is passed."""
    global _default_cache_dir
    _default_cache_dir = Path(path) if path is not None else None


def clear_memory_caches() -> None:
    """Drop the in-process prime list and factor table."""
    global _table_cache, _prime_cache
    _table_cache = None
    _prime_cache = None


def factor_table(x: int, cache_dir: Optional[os.PathLike] = None) -> FactorTable:
    """Factor table covering 1 <= n <= x.

    Memoised in-process (smaller requests slice the largest table built so
    far). With ``cache_dir`` the table is also read from / written to disk.
    """
    global _table_cache
    x = int(x)
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > HARD_CEILING:
        raise ValueError(f"x={x} exceeds the sieve ceiling {HARD_CEILING}")
    hi = x + 1
    if cache_dir is None:
        cache_dir = _default_cache_dir
    cached = _table_cache
    if cached is not None and cached.hi >= hi:
        return cached.window(1, hi)
    table = None
    if cache_dir is not None:
        path = cache_path(cache_dir, 1, hi)
        if path.exists():
            table = load_table(path)
    if table is None:
        table = build_table(1, hi)
        if cache_dir is not None:
            Path(cache_dir).mkdir(parents=True, exist_ok=True)
            save_table(cache_path(cache_dir, 1, hi), table)
    _table_cache = table
    return table


# ---------------------------------------------------------------------------
# single-integer queries


def distinct_prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division, ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def kth_prime_factor(
    n: int, k: int, direction: Literal["smallest", "largest"] = "smallest"
) -> Optional[int]:
    """p_k(n) (k-th smallest) or P_k(n) (k-th largest) distinct prime factor.

    Returns None when omega(n) < k, except that the smallest prime factor of
    1 is INFINITY_MARK.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if direction not in ("smallest", "largest"):
        raise ValueError(f"unknown direction {direction!r}")
    if n == 1:
        return INFINITY_MARK if (k == 1 and direction == "smallest") else None
    ps = distinct_prime_factors(n)
    if len(ps) < k:
        return None
    return ps[k - 1] if direction == "smallest" else ps[-k]
