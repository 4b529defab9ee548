"""Experiment drivers: one operation per numerically checkable claim.

* rough_integral_three_ways: an oscillatory prime-sum integral, its exact
  rough-number-count representation, and the closed-form value it should
  approach, all side by side.
* conditional_gaussianity: fix the small-prime values, resample the
  large-prime block, and KS-test the standardized components.
* concentration_experiment: per-seed pairs of the inner-sum variance and
  the Euler-product proxy, with correlation and ratio statistics.

Every report serializes to a plain dict (and back) losslessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from . import euler as _euler
from . import sampler as _sampler
from . import stats as _stats
from .primes import PrimeTable, rough_indicator
from .quadrature import QuadratureSpec, integrate_adaptive
from .sampler import RmfModel, RmfSampler


def _complex_to_dict(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


@dataclass
class RoughIntegralReport:
    """Three values for the same quantity: numeric integral, exact count form, asymptote."""

    lhs_numeric: complex
    mid_rough_count: float
    rhs_asymptotic: float
    x: int
    B: float
    W: float
    panels_used: int = 0
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "lhs_numeric": _complex_to_dict(self.lhs_numeric),
            "mid_rough_count": self.mid_rough_count,
            "rhs_asymptotic": self.rhs_asymptotic,
            "x": self.x,
            "B": self.B,
            "W": self.W,
            "panels_used": self.panels_used,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RoughIntegralReport":
        z = d["lhs_numeric"]
        return cls(complex(z["re"], z["im"]), d["mid_rough_count"], d["rhs_asymptotic"],
                   d["x"], d["B"], d["W"], d["panels_used"], d["converged"])


@dataclass
class GaussianityReport:
    x: int
    n_small_seeds: int
    n_large_resamples: int
    ks_real: float
    ks_imag: float | None
    variance_used: float
    corr_re_im: float | None
    model: str
    seed_small: int

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "n_small_seeds": self.n_small_seeds,
            "n_large_resamples": self.n_large_resamples,
            "ks_real": self.ks_real,
            "ks_imag": self.ks_imag,
            "variance_used": self.variance_used,
            "corr_re_im": self.corr_re_im,
            "model": self.model,
            "seed_small": self.seed_small,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianityReport":
        return cls(d["x"], d["n_small_seeds"], d["n_large_resamples"], d["ks_real"],
                   d["ks_imag"], d["variance_used"], d["corr_re_im"], d["model"],
                   d["seed_small"])


@dataclass
class ConcentrationReport:
    x: int
    n_trials: int
    pairs: list = field(repr=False)   # [(v1, v5), ...] in seed order
    correlation: float = 0.0
    median_ratio: float = 0.0
    mean_abs_diff: float = 0.0
    truncation_j: int = 0
    model: str = "steinhaus"
    seeds: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "n_trials": self.n_trials,
            "pairs": [[a, b] for a, b in self.pairs],
            "correlation": self.correlation,
            "median_ratio": self.median_ratio,
            "mean_abs_diff": self.mean_abs_diff,
            "truncation_j": self.truncation_j,
            "model": self.model,
            "seeds": list(self.seeds),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConcentrationReport":
        return cls(d["x"], d["n_trials"], [(a, b) for a, b in d["pairs"]],
                   d["correlation"], d["median_ratio"], d["mean_abs_diff"],
                   d["truncation_j"], d["model"], list(d["seeds"]))


def default_window(x: int) -> float:
    """Default oscillation window parameter W: (log log x)^2, at least 4."""
    return max(4.0, math.log(math.log(x)) ** 2)


def rough_integral_three_ways(table: PrimeTable, x: int, B: float,
                              W: float | None = None,
                              quad: QuadratureSpec | None = None) -> RoughIntegralReport:
    """Evaluate the rough-number integral three ways at scale x with cut B.

    (a) numeric: integral over u in [-W/log x, W/log x] of
        prod_{B<q<=sqrt(x)} (1 - q^{-1-iu})^{-1} * sum_{sqrt(x)<p<=x} x^{iu} p^{-1-iu};
        the integrand is deterministic (no sampled values).
    (b) exact count form: (2 pi / x) * sum over the same p of the count of
        B-rough m <= floor(x/p).
    (c) closed form: 2 pi e^{-gamma} log 2 / log B.
    """
    if x > table.limit:
        raise ValueError(f"x exceeds table limit {table.limit}")
    root = math.isqrt(x)
    if not 2 <= B <= root:
        raise ValueError(f"require 2 <= B <= sqrt(x); got B={B}, sqrt(x)={root}")
    if W is None:
        W = default_window(x)
    if quad is None:
        quad = QuadratureSpec(rel_tol=1e-5, abs_tol=1e-8)

    logx = math.log(x)
    qs = table.primes_in(B, root).astype(np.float64)
    inv_q = 1.0 / qs
    log_q = np.log(qs) if qs.size else qs
    ps = table.primes_in(root, x)
    pf = ps.astype(np.float64)
    inv_p = 1.0 / pf
    w_p = logx - np.log(pf)   # x^{iu} p^{-iu} = e^{iu w_p}

    def integrand(u_nodes: np.ndarray) -> np.ndarray:
        u_nodes = np.atleast_1d(u_nodes)
        out = np.empty(u_nodes.size, dtype=np.complex128)
        for k, u in enumerate(u_nodes.tolist()):
            sre = float(np.add.reduce(inv_p * np.cos(u * w_p)))
            sim = float(np.add.reduce(inv_p * np.sin(u * w_p)))
            if qs.size:
                ang = u * log_q
                zq = (np.cos(ang) - 1j * np.sin(ang)) * inv_q
                prod = complex(np.prod(1.0 / (1.0 - zq)))
            else:
                prod = 1.0 + 0.0j
            out[k] = prod * complex(sre, sim)
        return out

    U = W / logx
    res = integrate_adaptive(integrand, -U, U, quad,
                             min_panel_width=1.0 / (2.0 * math.log(root)))

    kmax = x // int(ps[0]) if ps.size else 0
    rough_pref = np.cumsum(rough_indicator(table, kmax, B).astype(np.int64))
    mid = 2.0 * math.pi / x * float(np.add.reduce(rough_pref[x // ps]))
    rhs = 2.0 * math.pi * math.exp(-_euler.EULER_GAMMA) * math.log(2.0) / math.log(B)
    return RoughIntegralReport(complex(res.value), mid, rhs, x, float(B), float(W),
                               res.panels_used, res.converged)


def conditional_gaussianity(table: PrimeTable, x: int, seed_small: int,
                            n_large: int, model: RmfModel = RmfModel.STEINHAUS) -> GaussianityReport:
    """KS-test the conditional law of the restricted sum given the small primes.

    The small-prime block (p <= sqrt(x), stream 0) stays fixed; the
    large-prime block is redrawn on streams 1..n_large.  Components are
    standardized by the conditional standard deviation derived from the
    realized inner sums (per-component variance V1/2 for Steinhaus, V1 for
    the real-valued Rademacher model) and compared against the standard
    normal CDF.
    """
    if not 16 <= x <= table.limit:
        raise ValueError(f"x must be in [16, {table.limit}]")
    if n_large < 10**3:
        raise ValueError("n_large must be >= 1000")
    s_small = RmfSampler(model, seed_small, stream=0)
    ps, inner = _sampler._restricted_terms(s_small, table, x)
    sk_re = np.ascontiguousarray(inner.real)
    sk_im = np.ascontiguousarray(inner.imag)
    loglog = math.log(math.log(x))
    v1 = math.sqrt(loglog) / x * float(np.add.reduce(sk_re * sk_re + sk_im * sk_im))
    if v1 == 0.0:
        raise ValueError("degenerate conditioning: all inner sums vanish")
    norm = loglog ** 0.25 / math.sqrt(x)

    re_out = np.empty(n_large)
    im_out = np.empty(n_large)
    for i in range(n_large):
        s_large = RmfSampler(model, seed_small, stream=i + 1)
        fre, fim = _sampler.values_at_primes(s_large, ps)
        re_out[i] = np.add.reduce(fre * sk_re) - np.add.reduce(fim * sk_im)
        im_out[i] = np.add.reduce(fre * sk_im) + np.add.reduce(fim * sk_re)
    re_out *= norm
    im_out *= norm

    if model is RmfModel.STEINHAUS:
        sigma = math.sqrt(v1 / 2.0)
        ks_re = _stats.ks_distance(re_out / sigma, ndtr)
        ks_im = _stats.ks_distance(im_out / sigma, ndtr)
        corr = float(np.corrcoef(re_out, im_out)[0, 1])
    else:
        sigma = math.sqrt(v1)
        ks_re = _stats.ks_distance(re_out / sigma, ndtr)
        ks_im = None
        corr = None
    return GaussianityReport(x, 1, n_large, ks_re, ks_im, v1, corr, model.value,
                             seed_small)


def concentration_experiment(table: PrimeTable, x: int, n_trials: int,
                             quad: QuadratureSpec | None = None,
                             model: RmfModel = RmfModel.STEINHAUS,
                             j: int | None = None,
                             seeds: list[int] | None = None) -> ConcentrationReport:
    """Per-seed (V1, V5) pairs plus correlation / ratio / difference statistics.

    Both quantities share the sampler within a seed, so the Euler product
    sees the same small-prime values that drive the inner sums.  Seeds
    default to 1..n_trials on stream 0.
    """
    if not 16 <= x <= table.limit:
        raise ValueError(f"x must be in [16, {table.limit}]")
    if n_trials < 50:
        raise ValueError("n_trials must be >= 50")
    if seeds is None:
        seeds = list(range(1, n_trials + 1))
    elif len(seeds) != n_trials:
        raise ValueError("seeds list length must equal n_trials")
    j_eff = _euler.truncation_level(x, j)
    pairs = []
    for seed in seeds:
        s = RmfSampler(model, seed, stream=0)
        v1 = _euler.v1_variance(s, table, x)
        v5 = _euler.v5_integral(s, table, x, quad=quad, j=j_eff).value
        pairs.append((v1, v5))
    arr = np.array(pairs)
    corr = float(np.corrcoef(np.log(arr[:, 0]), np.log(arr[:, 1]))[0, 1])
    med = float(np.median(arr[:, 0] / arr[:, 1]))
    mad = float(np.mean(np.abs(arr[:, 0] - arr[:, 1])))
    return ConcentrationReport(x, n_trials, pairs, corr, med, mad, j_eff,
                               model.value, list(seeds))
