"""Monte Carlo orchestration and distributional statistics.

Trial generation is embarrassingly parallel and keyed by seed, so serial
and threaded runs produce identical record lists.  Estimators (moments, KS
distance, tail-exponent fit, Gaussian-mixture reference CDF) are pure
functions of the records.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import euler as _euler
from . import sampler as _sampler
from .primes import PrimeTable
from .quadrature import QuadratureSpec
from .sampler import RmfModel, RmfSampler


@dataclass(frozen=True)
class ExperimentConfig:
    model: RmfModel
    x_list: tuple
    n_trials: int
    base_seed: int = 1
    quad: QuadratureSpec | None = None
    q_list: tuple = (0.5, 1.0)
    tail_thresholds: tuple | None = None
    with_v1: bool = False
    with_v5: bool = False
    truncation_j: int | None = None

    def __post_init__(self):
        if not self.x_list:
            raise ValueError("x_list must be nonempty")
        if any(x < 16 for x in self.x_list):
            raise ValueError("every x must be >= 16")
        if self.n_trials < 0:
            raise ValueError("n_trials must be >= 0")
        if any(not 0.0 < q < 2.0 for q in self.q_list):
            raise ValueError("q_list entries must lie in the open interval (0, 2)")
        if self.tail_thresholds is not None and any(y < 1.0 for y in self.tail_thresholds):
            raise ValueError("tail thresholds must be >= 1")


@dataclass
class TrialRecord:
    x: int
    seed: int
    normalized_sum: complex
    abs_value: float
    v1: float | None = None
    v5: float | None = None

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "seed": self.seed,
            "re": self.normalized_sum.real,
            "im": self.normalized_sum.imag,
            "abs": self.abs_value,
            "v1": self.v1,
            "v5": self.v5,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialRecord":
        return cls(d["x"], d["seed"], complex(d["re"], d["im"]), d["abs"],
                   d.get("v1"), d.get("v5"))


def _one_trial(cfg: ExperimentConfig, table: PrimeTable, x: int, seed: int) -> TrialRecord:
    s = RmfSampler(cfg.model, seed, stream=0)
    ps, inner = _sampler._restricted_terms(s, table, x)
    fre, fim = _sampler.values_at_primes(s, ps)
    re = _sampler._dot(fre, inner.real) - _sampler._dot(fim, inner.imag)
    im = _sampler._dot(fre, inner.imag) + _sampler._dot(fim, inner.real)
    z = _sampler.normalize_sum(complex(re, im), x)
    v1 = v5 = None
    if cfg.with_v1:
        tot = float(np.add.reduce(inner.real * inner.real + inner.imag * inner.imag))
        v1 = math.sqrt(math.log(math.log(x))) / x * tot
    if cfg.with_v5:
        v5 = _euler.v5_integral(s, table, x, quad=cfg.quad, j=cfg.truncation_j).value
    return TrialRecord(x, seed, z, abs(z), v1, v5)


def run_trials(cfg: ExperimentConfig, table: PrimeTable, threads: int = 1) -> list:
    """All trial records for cfg, deterministic and ordered by (x, trial index).

    Trial i at scale x uses seed base_seed + i on stream 0.  threads = 0
    means one worker per CPU; any thread count yields the identical list.
    Per-trial failures are reported on stderr and skipped.
    """
    if max(cfg.x_list) > table.limit:
        raise ValueError(f"max x exceeds table limit {table.limit}")
    tasks = [(x, cfg.base_seed + i) for x in cfg.x_list for i in range(cfg.n_trials)]
    results: list = [None] * len(tasks)

    def work(idx: int) -> None:
        x, seed = tasks[idx]
        try:
            results[idx] = _one_trial(cfg, table, x, seed)
        except Exception as exc:  # keep the run alive, note the casualty
            print(f"trial x={x} seed={seed} failed: {exc}", file=sys.stderr)

    n_workers = threads if threads > 0 else (os.cpu_count() or 1)
    if n_workers == 1:
        for i in range(len(tasks)):
            work(i)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            list(ex.map(work, range(len(tasks))))
    return [r for r in results if r is not None]


def records_to_jsonl(records: list) -> str:
    import json

    return "\n".join(json.dumps(r.to_dict()) for r in records)


def records_from_jsonl(text: str) -> list:
    import json

    return [TrialRecord.from_dict(json.loads(line))
            for line in text.splitlines() if line.strip()]


def empirical_moment(records: list, q: float) -> tuple[float, float]:
    """Sample mean of |normalized sum|^q with its standard error."""
    if not 0.0 < q < 2.0:
        raise ValueError("q must lie in (0, 2)")
    if len(records) < 2:
        raise ValueError("need at least 2 records")
    vals = np.array([r.abs_value for r in records]) ** q
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals)))


def winsorized_moment(records: list, q: float, upper: float = 0.999) -> float:
    """Moment with the top (1-upper) quantile clipped; companion readout for q > 1."""
    vals = np.array([r.abs_value for r in records])
    cap = np.quantile(vals, upper)
    return float(np.mean(np.minimum(vals, cap) ** q))


def ks_distance(samples, cdf) -> float:
    """Sup distance between the empirical CDF of `samples` and a reference CDF.

    `cdf` must be a monotone (vectorizable) distribution function.  Uses the
    order-statistics formula, so input order is irrelevant.
    """
    v = np.sort(np.asarray(samples, dtype=np.float64))
    n = v.size
    if n < 10:
        raise ValueError("need at least 10 samples")
    f = np.asarray(cdf(v), dtype=np.float64)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1) / n))
    return min(1.0, max(d_plus, d_minus, 0.0))


@dataclass
class TailFit:
    alpha: float
    ci: tuple[float, float]
    n_thresholds_used: int
    flagged_non_power_law: bool
    alpha_lower_half: float
    alpha_upper_half: float


def _slope_from_freq(thresholds: np.ndarray, freq: np.ndarray):
    keep = freq > 0.0
    if keep.sum() < 2:
        return None
    slope = np.polyfit(np.log(thresholds[keep]), np.log(freq[keep]), 1)[0]
    return -float(slope), int(keep.sum())


def tail_exponent(records: list, thresholds, n_boot: int = 200,
                  rng_seed: int = 0) -> TailFit:
    """Tail exponent by log-log least squares over a threshold grid.

    Fits log P(|.|>y) against log y; alpha is minus the slope; the CI is a
    percentile bootstrap (n_boot resamples).  The statistic depends on the
    data only through the exceedance counts, so the bootstrap draws bin
    counts multinomially, which is exactly equivalent to resampling the
    sample itself.  A large disagreement between the fits on the lower and
    upper halves of the grid flags the sample as not power-law (an
    exponential tail, say, steepens with y).
    """
    if len(records) < 10**3:
        raise ValueError("need at least 1000 records for a tail fit")
    vals = np.sort(np.array([r.abs_value if isinstance(r, TrialRecord) else float(r)
                             for r in records]))
    n = vals.size
    if thresholds is None:
        thresholds = default_thresholds(vals)
    thresholds = np.sort(np.asarray(thresholds, dtype=np.float64))
    n_below = np.searchsorted(vals, thresholds, side="right")
    freq = (n - n_below) / n
    base = _slope_from_freq(thresholds, freq)
    if base is None:
        raise ValueError("fewer than 2 thresholds have nonempty tails")
    alpha, n_used = base

    half = len(thresholds) // 2
    lo_fit = _slope_from_freq(thresholds[:half], freq[:half]) if half >= 2 else None
    hi_fit = (_slope_from_freq(thresholds[half:], freq[half:])
              if len(thresholds) - half >= 2 else None)
    a_lo = lo_fit[0] if lo_fit else alpha
    a_hi = hi_fit[0] if hi_fit else alpha
    flagged = abs(a_hi - a_lo) > max(0.5, 0.35 * abs(alpha))

    rng = np.random.Generator(np.random.PCG64(rng_seed))
    bin_probs = np.diff(np.concatenate(([0], n_below, [n]))) / n
    draws = rng.multinomial(n, bin_probs, size=n_boot)
    boot = []
    for row in draws:
        freq_b = (n - np.cumsum(row[:-1])) / n
        res = _slope_from_freq(thresholds, freq_b)
        if res is not None:
            boot.append(res[0])
    if boot:
        ci = (float(np.percentile(boot, 2.5)), float(np.percentile(boot, 97.5)))
    else:
        ci = (float("nan"), float("nan"))
    return TailFit(alpha, ci, int(n_used), bool(flagged), a_lo, a_hi)


def default_thresholds(values, count: int = 8, q_lo: float = 0.8,
                       q_hi: float = 0.995) -> np.ndarray:
    """Geometric threshold grid between the q_lo and q_hi sample quantiles."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = np.quantile(v, q_lo), np.quantile(v, q_hi)
    if not 0 < lo < hi:
        raise ValueError("degenerate sample for threshold construction")
    return np.geomspace(lo, hi, count)


def gaussian_mixture_reference(v5_samples):
    """CDF of |sqrt(V) Z|, V uniform over the sample cloud, Z standard complex normal.

    F(r) = mean over samples of 1 - exp(-r^2 / V).  Returns a vectorized
    callable; raises on negative variance samples.
    """
    v = np.asarray(list(v5_samples), dtype=np.float64)
    if v.size == 0:
        raise ValueError("need at least one variance sample")
    if np.any(v < 0):
        raise ValueError("variance samples must be nonnegative")

    chunk = max(1, 2_000_000 // v.size)

    def cdf(r):
        r = np.asarray(r, dtype=np.float64)
        scalar = r.ndim == 0
        rr = np.atleast_1d(r)
        out = np.empty(rr.size)
        for i in range(0, rr.size, chunk):
            r2 = rr[i : i + chunk] ** 2
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = r2[:, None] / v[None, :]
                terms = np.where(ratio > 0, -np.expm1(-ratio), 0.0)
            out[i : i + chunk] = terms.mean(axis=1)
        out = np.where(rr <= 0, 0.0, out)
        return float(out[0]) if scalar else out

    return cdf


@dataclass
class SummaryStats:
    """Aggregated moments, tail frequencies, tail fits, and mixture-KS values."""

    moments: list = field(default_factory=list)      # {x, q, moment, stderr, winsorized?}
    tail_freqs: list = field(default_factory=list)   # {x, y, tailfreq}
    tail_fits: list = field(default_factory=list)    # {x, alpha, ci_lo, ci_hi, flagged}
    ks_mixture: list = field(default_factory=list)   # {x, ks}

    def to_dict(self) -> dict:
        return {
            "moments": self.moments,
            "tail_freqs": self.tail_freqs,
            "tail_fits": self.tail_fits,
            "ks_mixture": self.ks_mixture,
        }


def summarize(records: list, cfg: ExperimentConfig) -> SummaryStats:
    """Per-x summary of a record list under the given config."""
    out = SummaryStats()
    for x in cfg.x_list:
        recs = [r for r in records if r.x == x]
        if len(recs) < 2:
            continue
        for q in cfg.q_list:
            m, se = empirical_moment(recs, q)
            entry = {"x": x, "q": q, "moment": m, "stderr": se}
            if q > 1.0:
                entry["winsorized"] = winsorized_moment(recs, q)
            out.moments.append(entry)
        vals = np.array([r.abs_value for r in recs])
        thresholds = (np.asarray(cfg.tail_thresholds, dtype=np.float64)
                      if cfg.tail_thresholds is not None else None)
        if thresholds is None and len(recs) >= 10**3:
            thresholds = default_thresholds(vals)
        if thresholds is not None:
            for y in thresholds:
                out.tail_freqs.append({"x": x, "y": float(y),
                                       "tailfreq": float((vals > y).mean())})
            if len(recs) >= 10**3:
                fit = tail_exponent(recs, thresholds, rng_seed=cfg.base_seed)
                out.tail_fits.append({"x": x, "alpha": fit.alpha,
                                      "ci_lo": fit.ci[0], "ci_hi": fit.ci[1],
                                      "flagged_non_power_law": fit.flagged_non_power_law})
        v5s = [r.v5 for r in recs if r.v5 is not None]
        if v5s:
            ks = ks_distance(vals, gaussian_mixture_reference(v5s))
            out.ks_mixture.append({"x": x, "ks": ks})
    return out
