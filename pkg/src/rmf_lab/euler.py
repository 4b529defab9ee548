"""Truncated random Euler products at the critical line and their statistics.

Contains the log-space product evaluator, the exact mean-square and
pair-expectation formulas (closed products over primes, no sampling), the
weighted mean-square integral proxy (`v5_integral`) and the inner-sum
variance (`v1_variance`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sampler as _sampler
from .quadrature import QuadratureSpec, integrate_adaptive
from .sampler import RmfModel, RmfSampler

EULER_GAMMA = 0.5772156649015329
# weight constant for the Euler-product variance proxy: e^{-gamma} * log 2 / (2 pi)
C_WEIGHT = math.exp(-EULER_GAMMA) * math.log(2.0) / (2.0 * math.pi)

_QUAD_T_CAP = 1e3


@dataclass(frozen=True)
class EulerCutoffs:
    """Truncation geometry: product over primes p <= cutoff = x^{e^{-j}/2}."""

    x: int
    j: int

    def __post_init__(self):
        if self.x < 4:
            raise ValueError("x must be >= 4")
        if self.j < 0:
            raise ValueError("j must be >= 0")
        if self.cutoff < 2:
            raise ValueError(f"cutoff {self.cutoff:.3g} < 2; j too large for this x")

    @property
    def cutoff(self) -> float:
        return float(self.x) ** (math.exp(-self.j) / 2.0)


def truncation_level(x: int, j: int | None = None) -> int:
    """Effective truncation level for the variance proxy at scale x.

    Defaults to min(floor(100 * log log log x), largest j with cutoff >=
    max(x^{1/10}, 11)), floored at 0.  An explicit j skips the formula but
    is still validated against the cutoff >= 11 requirement.
    """
    if x < 16:
        raise ValueError("x must be >= 16")

    def _cutoff(jj: int) -> float:
        return float(x) ** (math.exp(-jj) / 2.0)

    floor_b = max(11.0, float(x) ** 0.1)
    if j is not None:
        if j < 0:
            raise ValueError("j must be >= 0")
        if _cutoff(j) < 11.0:
            raise ValueError(
                f"truncation level {j} gives product cutoff {_cutoff(j):.3g} < 11 at x={x}")
        return j
    lll = math.log(math.log(math.log(x))) if math.log(math.log(x)) > 1.0 else 0.0
    raw = max(0, math.floor(100.0 * lll))
    jj = raw
    while jj > 0 and _cutoff(jj) < floor_b:
        jj -= 1
    if _cutoff(jj) < 11.0:
        raise ValueError(f"x={x} too small: even the full product cutoff is below 11")
    return jj


@dataclass(frozen=True)
class EulerProductValue:
    """Product value in log form: |F| = exp(log_mag), arg F = phase in (-pi, pi]."""

    log_mag: float
    phase: float

    def to_complex(self) -> complex:
        m = math.exp(self.log_mag)
        return complex(m * math.cos(self.phase), m * math.sin(self.phase))


def _factor_logs(s: RmfSampler, table, cutoff: float, t: float):
    """Per-factor principal logs of the Euler factors at s = 1/2 + it."""
    ps = table.primes[: np.searchsorted(table.primes, cutoff, side="right")]
    if ps.size == 0:
        return None
    pf = ps.astype(np.float64)
    amp = pf ** -0.5
    fre, fim = _sampler.values_at_primes(s, ps)
    c0 = np.cos(t * np.log(pf))
    s0 = np.sin(t * np.log(pf))
    # z = f(p) p^{-1/2 - it}
    zre = amp * (fre * c0 + fim * s0)
    zim = amp * (fim * c0 - fre * s0)
    if s.model is RmfModel.STEINHAUS:
        wre, wim = 1.0 - zre, -zim      # factor = 1/(1 - z)
        sign = -1.0
    else:
        wre, wim = 1.0 + zre, zim       # factor = 1 + z
        sign = 1.0
    log_norm = 0.5 * np.log(wre * wre + wim * wim)
    args = np.arctan2(wim, wre)
    return sign, log_norm, args


def euler_product(s: RmfSampler, table, c: EulerCutoffs, t: float) -> EulerProductValue:
    """Truncated Euler product at 1/2 + it, accumulated in log space.

    Steinhaus multiplies (1 - f(p) p^{-1/2-it})^{-1}, Rademacher multiplies
    (1 + f(p) p^{-1/2-it}); each factor contributes its principal log and
    the total phase is reduced to (-pi, pi] at the end.  A Rademacher factor
    of exactly zero would need |f(p)| p^{-1/2} = 1, impossible for p >= 2.
    """
    if c.cutoff > table.limit:
        raise ValueError(f"cutoff {c.cutoff:.3g} exceeds table limit {table.limit}")
    fl = _factor_logs(s, table, c.cutoff, t)
    if fl is None:
        return EulerProductValue(0.0, 0.0)
    sign, log_norm, args = fl
    log_mag = sign * float(np.add.reduce(log_norm))
    phase = sign * float(np.add.reduce(args))
    phase = math.remainder(phase, 2.0 * math.pi)
    if phase <= -math.pi:
        phase += 2.0 * math.pi
    return EulerProductValue(log_mag, phase)


def mean_square_exact(table, model: RmfModel, cutoff: float) -> float:
    """Exact expected |F(1/2+it)|^2, independent of t.

    Steinhaus: product of (1 - 1/p)^{-1}; Rademacher: product of (1 + 1/p),
    over primes p <= cutoff.
    """
    if cutoff > table.limit:
        raise ValueError(f"cutoff {cutoff:.3g} exceeds table limit {table.limit}")
    ps = table.primes[: np.searchsorted(table.primes, cutoff, side="right")].astype(np.float64)
    if ps.size == 0:
        return 1.0
    if model is RmfModel.STEINHAUS:
        return float(np.prod(ps / (ps - 1.0)))
    return float(np.prod((ps + 1.0) / ps))


def pair_expectation_exact(table, model: RmfModel, lo: float, hi: float,
                           t1: float, t2: float) -> complex:
    """Exact E[I(t1) conj(I(t2))] for the product over primes in (lo, hi].

    Steinhaus: product of (1 - p^{-1-i(t1-t2)})^{-1} (the full geometric
    series telescopes, no error term); Rademacher: product of
    (1 + p^{-1-i(t1-t2)}).
    """
    if not 2 <= lo < hi <= table.limit:
        raise ValueError("require 2 <= lo < hi <= table limit")
    ps = table.primes_in(lo, hi).astype(np.float64)
    if ps.size == 0:
        return 1.0 + 0.0j
    ang = (t1 - t2) * np.log(ps)
    z = (np.cos(ang) - 1j * np.sin(ang)) / ps
    if model is RmfModel.STEINHAUS:
        return complex(np.prod(1.0 / (1.0 - z)))
    return complex(np.prod(1.0 + z))


class WeightedSquareIntegrand:
    """|F(1/2+it)|^2 / |1/2+it|^2 as a vectorized function of t, fixed sampler."""

    _CHUNK = 4_000_000  # cap on nodes x primes temporaries

    def __init__(self, s: RmfSampler, table, cutoff: float):
        ps = table.primes[: np.searchsorted(table.primes, cutoff, side="right")]
        if ps.size == 0:
            raise ValueError("empty Euler product: cutoff below 2")
        pf = ps.astype(np.float64)
        self._logp = np.log(pf)
        self._amp2 = 1.0 / pf           # a^2 = 1/p
        self._two_amp = 2.0 * pf ** -0.5
        fre, fim = _sampler.values_at_primes(s, ps)
        self._theta = np.arctan2(fim, fre)
        self._steinhaus = s.model is RmfModel.STEINHAUS

    def log_abs2(self, t: np.ndarray) -> np.ndarray:
        """log |F(1/2+it)|^2, vectorized over t."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.empty(t.size)
        step = max(1, self._CHUNK // max(1, self._logp.size))
        for i in range(0, t.size, step):
            tt = t[i : i + step]
            phi = self._theta[None, :] - tt[:, None] * self._logp[None, :]
            if self._steinhaus:
                m = (1.0 + self._amp2) - self._two_amp * np.cos(phi)
                out[i : i + step] = -np.add.reduce(np.log(m), axis=1)
            else:
                m = (1.0 + self._amp2) + self._two_amp * np.cos(phi)
                out[i : i + step] = np.add.reduce(np.log(m), axis=1)
        return out

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return np.exp(self.log_abs2(t)) / (0.25 + t * t)


def default_quad_T(x: int) -> float:
    """Default integration half-width: max(10, (log log x)^4), capped at 1e3."""
    return min(_QUAD_T_CAP, max(10.0, math.log(math.log(x)) ** 4))


@dataclass
class V5Result:
    """Weighted Euler-product variance proxy plus quadrature metadata.

    `value` uses the (log log B)^{1/2}/log B weight; `value_loglog_x` swaps
    in (log log x)^{1/2} (the two differ materially at small x, so both are
    reported).  `tail_bound` is the expectation-level estimate of the mass
    beyond |t| > T; it is not added to `value`.
    """

    value: float
    q_integral: float
    tail_bound: float
    panels_used: int
    converged: bool
    j: int
    B: float
    T: float
    value_loglog_x: float


def v5_integral(s: RmfSampler, table, x: int, quad: QuadratureSpec | None = None,
                j: int | None = None) -> V5Result:
    """Variance proxy: C (log log B)^{1/2}/log B * integral of |F_j|^2/|1/2+it|^2.

    The integral runs over [-T, T] by adaptive quadrature; the omitted tail
    is estimated (in expectation) by mean_square * measure of {|t| > T}
    under dt/|1/2+it|^2 and attached as metadata.  Non-convergence at
    max_depth flags the result rather than failing.
    """
    if x < 16:
        raise ValueError("x must be >= 16")
    j_eff = truncation_level(x, j)
    B = float(x) ** (math.exp(-j_eff) / 2.0)
    if B > table.limit:
        raise ValueError(f"product cutoff {B:.3g} exceeds table limit {table.limit}")
    if quad is None:
        quad = QuadratureSpec()
    T = quad.T if quad.T is not None else default_quad_T(x)
    integrand = WeightedSquareIntegrand(s, table, B)
    res = integrate_adaptive(integrand, -T, T, quad,
                             min_panel_width=1.0 / (2.0 * math.log(B)))
    q_val = float(res.value)
    msq = mean_square_exact(table, s.model, B)
    tail = msq * 2.0 * (math.pi - 2.0 * math.atan(2.0 * T))
    log_b = math.log(B)
    weight = C_WEIGHT * math.sqrt(math.log(log_b)) / log_b
    weight_x = C_WEIGHT * math.sqrt(math.log(math.log(x))) / log_b
    return V5Result(
        value=weight * q_val,
        q_integral=q_val,
        tail_bound=tail,
        panels_used=res.panels_used,
        converged=res.converged,
        j=j_eff,
        B=B,
        T=float(T),
        value_loglog_x=weight_x * q_val,
    )


def v1_variance(s: RmfSampler, table, x: int) -> float:
    """(log log x)^{1/2}/x times the summed |S(floor(x/p))|^2 over p in (sqrt(x), x]."""
    if not 16 <= x <= table.limit:
        raise ValueError(f"x must be in [16, {table.limit}], got {x}")
    ps, inner = _sampler._restricted_terms(s, table, x)
    if ps.size == 0:
        return 0.0
    tot = float(np.add.reduce(inner.real * inner.real + inner.imag * inner.imag))
    return math.sqrt(math.log(math.log(x))) / x * tot
