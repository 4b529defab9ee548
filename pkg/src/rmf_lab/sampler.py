"""Seed-deterministic sampling of random multiplicative functions.

Two models: Steinhaus (values uniform on the unit circle at every prime,
extended completely multiplicatively) and Rademacher (independent signs at
primes, zero on non-squarefree integers).

Values at primes come from a stateless counter-based generator: a 64-bit
avalanche mix of (seed, stream, p).  That gives random access by prime with
no sequential state, so the large-prime block can be resampled while the
small-prime block stays fixed (vary `stream`, keep `seed`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U1 = np.uint64(_MIX1)
_U2 = np.uint64(_MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_TWO_POW_NEG53 = 2.0 ** -53


class RmfModel(enum.Enum):
    STEINHAUS = "steinhaus"
    RADEMACHER = "rademacher"


def _mix64_int(z: int) -> int:
    """64-bit finalizer (splitmix64 style) on a Python int."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    # uint64 arithmetic wraps mod 2**64, which is exactly what we want
    z = (z ^ (z >> _S30)) * _U1
    z = (z ^ (z >> _S27)) * _U2
    return z ^ (z >> _S31)


@dataclass(frozen=True)
class RmfSampler:
    """Immutable sampler identity: f(p) is a pure function of (model, seed, stream, p)."""

    model: RmfModel
    seed: int
    stream: int = 0

    def _key(self) -> int:
        k = _mix64_int((self.seed & _MASK64) + _GOLDEN)
        return _mix64_int(k + (self.stream & _MASK64))


def _hash_primes(s: RmfSampler, ps: np.ndarray) -> np.ndarray:
    key = np.uint64(s._key())
    return _mix64(ps.astype(np.uint64) ^ key)


def values_at_primes(s: RmfSampler, ps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(re, im) float64 arrays of f(p) for an array of primes.

    Steinhaus: e^{2 pi i u} with u built from the 53 high bits of the hash.
    Rademacher: sign from the top hash bit, imaginary part exactly 0.
    """
    h = _hash_primes(s, np.asarray(ps, dtype=np.int64))
    if s.model is RmfModel.STEINHAUS:
        u = (h >> _S11).astype(np.float64) * _TWO_POW_NEG53
        theta = (2.0 * np.pi) * u
        return np.cos(theta), np.sin(theta)
    sign = 1.0 - 2.0 * (h >> _S63).astype(np.float64)
    return sign, np.zeros_like(sign)


def f_at_prime(s: RmfSampler, p: int) -> complex:
    """f(p) at a single prime (caller guarantees primality)."""
    re, im = values_at_primes(s, np.array([p], dtype=np.int64))
    return complex(re[0], im[0])


def f_at(s: RmfSampler, table, n: int) -> complex:
    """f(n) by factoring n through the largest-prime-factor map.

    f(1) = 1.  Rademacher gives exact 0 when any prime divides n twice.
    """
    if not 1 <= n <= table.limit:
        raise ValueError(f"n must be in [1, {table.limit}], got {n}")
    val = 1.0 + 0.0j
    m = n
    while m > 1:
        p = int(table.lpf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if s.model is RmfModel.RADEMACHER and e >= 2:
            return 0.0 + 0.0j
        fp = f_at_prime(s, p)
        for _ in range(e):
            val *= fp
    return val


def partial_sum_prefix(s: RmfSampler, table, limit: int) -> np.ndarray:
    """Prefix sums S(k) = sum of f(m) for m <= k, as complex128 of length limit + 1.

    S(0) = 0.  Built by a multiplicative sieve: each prime power slice
    multiplies in one more factor of f(p), so f(n) = prod f(p)^{v_p(n)}
    lands in place after the loop; Rademacher zeroes the non-squarefree
    slots instead of using higher powers.
    """
    if limit > table.limit:
        raise ValueError(f"limit {limit} exceeds table limit {table.limit}")
    if limit < 0:
        raise ValueError("limit must be >= 0")
    f = np.ones(limit + 1, dtype=np.complex128)
    f[0] = 0.0
    ps = table.primes[: np.searchsorted(table.primes, limit, side="right")]
    if ps.size:
        re, im = values_at_primes(s, ps)
        fp_vals = re + 1j * im
        if s.model is RmfModel.STEINHAUS:
            for p, fp in zip(ps.tolist(), fp_vals.tolist()):
                q = p
                while q <= limit:
                    f[q::q] *= fp
                    q *= p
        else:
            for p, fp in zip(ps.tolist(), fp_vals.tolist()):
                f[p::p] *= fp
                q = p * p
                if q <= limit:
                    f[q::q] = 0.0
    out = np.empty(limit + 1, dtype=np.complex128)
    out[0] = 0.0
    np.cumsum(f[1:], out=out[1:])
    return out


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    # pairwise ufunc reduction: deterministic regardless of BLAS threading
    return float(np.add.reduce(a * b))


def _restricted_terms(s: RmfSampler, table, x: int):
    """Shared kernel: primes p in (sqrt(x), x], inner sums S(floor(x/p)) gathered."""
    root = math.isqrt(x)
    ps = table.primes_in(root, x)
    if ps.size == 0:
        return ps, None
    kmax = x // int(ps[0])
    prefix = partial_sum_prefix(s, table, kmax)
    return ps, prefix[x // ps]


def restricted_sum(s: RmfSampler, table, x: int) -> complex:
    """Sum of f(n) over n <= x whose largest prime factor exceeds sqrt(x).

    Computed in factorized form: sum over primes p in (sqrt(x), x] of
    f(p) * S(floor(x/p)), which equals the direct definition exactly
    (such n have p to the first power and cofactor below sqrt(x)).
    """
    if not 4 <= x <= table.limit:
        raise ValueError(f"x must be in [4, {table.limit}], got {x}")
    ps, inner = _restricted_terms(s, table, x)
    if ps.size == 0:
        return 0.0 + 0.0j
    fre, fim = values_at_primes(s, ps)
    re = _dot(fre, inner.real) - _dot(fim, inner.imag)
    im = _dot(fre, inner.imag) + _dot(fim, inner.real)
    return complex(re, im)


def normalize_sum(v: complex, x: int) -> complex:
    """Scale a restricted sum by (log log x)^{1/4} / sqrt(x)."""
    if x < 16:
        raise ValueError(f"x must be >= 16, got {x}")
    return v * (math.log(math.log(x)) ** 0.25 / math.sqrt(x))
