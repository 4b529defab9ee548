"""Integer-arithmetic substrate: sieves, largest prime factors, prime sums.

Everything downstream (partial sums, Euler products, rough-number counts)
works against one immutable :class:`PrimeTable`.  The table stores a
primality bitmap, the full largest-prime-factor map, and the sorted prime
list, so random access and vectorized slicing are both O(1)-ish after the
one-time build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_LIMIT_MAX = 2**31 - 1


@dataclass(frozen=True)
class PrimeTable:
    """Primality, largest-prime-factor map and prime iteration up to `limit`.

    Attributes
    ----------
    limit : int
        Inclusive upper bound of the table, 2 <= limit <= 2**31 - 1.
    is_prime : numpy bool array of length limit + 1
        is_prime[n] iff n is prime.
    lpf : numpy int32 array of length limit + 1
        lpf[n] = largest prime factor of n for n >= 2; lpf[1] = 1 by
        convention (1 has no prime factor), lpf[0] = 0.
    primes : numpy int64 array
        All primes <= limit in ascending order.
    """

    limit: int
    is_prime: np.ndarray = field(repr=False)
    lpf: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    def primes_in(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo < p <= hi, ascending (half-open on the left)."""
        i = np.searchsorted(self.primes, lo, side="right")
        j = np.searchsorted(self.primes, hi, side="right")
        return self.primes[i:j]


def build_prime_table(limit: int) -> PrimeTable:
    """Sieve primality and largest prime factors up to `limit`.

    The lpf map is equivalent to writing each prime p over its multiples in
    ascending p order (last write wins, i.e. the largest prime factor).  For
    speed the writes are split: primes <= sqrt(limit) go in ascending slice
    order, while each n with a prime factor q > sqrt(limit) has exactly one
    such q, so those entries are written in one vectorized pass per cofactor.
    """
    limit = int(limit)
    if limit < 2 or limit > _LIMIT_MAX:
        raise ValueError(f"limit must be in [2, {_LIMIT_MAX}], got {limit}")

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)

    lpf = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        lpf[1] = 1
    root = math.isqrt(limit)
    for p in primes[primes <= root]:
        lpf[int(p) :: int(p)] = p
    large = primes[primes > root]
    if large.size:
        large32 = large.astype(np.int32)
        k = 1
        while k * int(large[0]) <= limit:
            sub = large32[: np.searchsorted(large, limit // k, side="right")]
            lpf[sub.astype(np.int64) * k] = sub
            k += 1

    return PrimeTable(limit=limit, is_prime=is_prime, lpf=lpf, primes=primes)


def largest_prime_factor(table: PrimeTable, n: int) -> int:
    """P(n): the largest prime factor of n; P(1) = 1 by convention."""
    if not 1 <= n <= table.limit:
        raise ValueError(f"n must be in [1, {table.limit}], got {n}")
    return int(table.lpf[n])


def mertens_sum(table: PrimeTable, x: float) -> float:
    """Sum of 1/p over primes p <= x, accumulated in ascending p order."""
    if not 2 <= x <= table.limit:
        raise ValueError(f"x must be in [2, {table.limit}], got {x}")
    ps = table.primes[: np.searchsorted(table.primes, x, side="right")]
    return float(np.sum(1.0 / ps))


@dataclass(frozen=True)
class RoughSmoothQuery:
    """Query for rough/smooth counts: x is the range bound, y the factor bound."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("x and y must be finite")
        if self.x < 1 or self.y < 2:
            raise ValueError("require x >= 1 and y >= 2")


def rough_count(table: PrimeTable, q: RoughSmoothQuery) -> int:
    """Count of n <= x all of whose prime factors exceed y (n = 1 included)."""
    if q.x > table.limit:
        raise ValueError(f"x must be <= table limit {table.limit}")
    return int(rough_indicator(table, int(q.x), q.y).sum())


def rough_indicator(table: PrimeTable, upto: int, y: float) -> np.ndarray:
    """Boolean array r of length upto + 1 with r[n] iff n is y-rough, n >= 1.

    Shared kernel for rough_count and the batched rough-number prefix counts
    used by the oscillatory-integral checks.
    """
    if upto > table.limit:
        raise ValueError(f"upto must be <= table limit {table.limit}")
    r = np.ones(upto + 1, dtype=bool)
    r[0] = False
    for p in table.primes[: np.searchsorted(table.primes, min(y, upto), side="right")]:
        r[int(p) :: int(p)] = False
    return r


def smooth_count(table: PrimeTable, q: RoughSmoothQuery) -> int:
    """Count of n <= x all of whose prime factors are at most y (n = 1 included)."""
    if q.x > table.limit:
        raise ValueError(f"x must be <= table limit {table.limit}")
    xi = int(q.x)
    # lpf[n] <= y iff n is y-smooth; lpf[1] = 1 counts n = 1.
    return int(np.count_nonzero(table.lpf[1 : xi + 1] <= q.y))


def prime_sum_oscillation(table: PrimeTable, x: float, y: float, t: float) -> complex:
    """Sum of p^(-1-it) over primes x < p <= y.

    Equals sum of (1/p)(cos(t log p) - i sin(t log p)); returns 0 for an
    empty range.
    """
    if not 100 <= x <= y <= table.limit:
        raise ValueError("require 100 <= x <= y <= table limit")
    ps = table.primes_in(x, y)
    if ps.size == 0:
        return 0.0 + 0.0j
    inv = 1.0 / ps
    theta = t * np.log(ps.astype(np.float64))
    return complex(np.dot(inv, np.cos(theta)), -np.dot(inv, np.sin(theta)))
