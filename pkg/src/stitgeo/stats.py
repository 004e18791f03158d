"""Monte Carlo harness, weighted estimators and goodness-of-fit tests.

Replicates are driven from a single master seed through deterministic
substreams, so pooled results are independent of worker count and replicate
completion order.  Uncertainty is always assessed at replicate level
(objects within one tessellation are dependent): ratio estimates carry
jackknife standard errors, and weighted goodness-of-fit tests replace the
sample size by the effective sample size of the weights.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats as sps

from .engine import subseed


class StatsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class EstimateReport:
    statistic: str
    mode: str
    estimate: float
    stderr: float
    ci_low: float
    ci_high: float
    effective_sample_size: float
    replicates: int

    def __post_init__(self):
        if not (self.ci_low <= self.estimate <= self.ci_high):
            raise StatsError("confidence interval must contain the estimate")
        if self.stderr < 0:
            raise StatsError("standard error must be nonnegative")

    def to_json(self) -> dict:
        return {
            "statistic": self.statistic,
            "mode": self.mode,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "ci95": [self.ci_low, self.ci_high],
            "effective_sample_size": self.effective_sample_size,
            "replicates": self.replicates,
        }


@dataclass(frozen=True)
class GofReport:
    test: str  # "ks" | "chi2" | "poisson-dispersion"
    statistic: float
    p_value: float
    description: str = ""

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise StatsError("p-value must lie in [0, 1]")

    def to_json(self) -> dict:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "description": self.description,
        }


# ---------------------------------------------------------------------------
# Monte Carlo replication


@dataclass
class Pool:
    """Per-replicate collector outputs, mergeable and order-independent."""

    replicates: list = field(default_factory=list)

    def scalar(self, key: str) -> np.ndarray:
        return np.array([float(r[key]) for r in self.replicates])

    def concat(self, key: str) -> np.ndarray:
        parts = [np.asarray(r[key]) for r in self.replicates if len(r[key])]
        if not parts:
            return np.empty(0)
        return np.concatenate(parts)

    @property
    def n_replicates(self) -> int:
        return len(self.replicates)


def _mc_worker(args):
    collector, seed, rep = args
    return rep, collector(subseed(seed, rep))


def mc_run(collector, replicates: int, seed, threads: int = 1) -> Pool:
    """Run ``collector(sub_seed)`` for each replicate and pool the outputs.

    ``collector`` simulates whatever it needs from the given seed and returns
    a dict of scalars / arrays.  Results are placed by replicate index, so
    the pool is identical for any ``threads``.
    """
    if replicates < 1:
        raise StatsError("replicates must be >= 1")
    results = [None] * replicates
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for rep, out in ex.map(
                _mc_worker,
                [(collector, seed, r) for r in range(replicates)],
                chunksize=max(1, replicates // (8 * threads)),
            ):
                results[rep] = out
    else:
        for r in range(replicates):
            results[r] = collector(subseed(seed, r))
    return Pool(list(results))


def ratio_estimate(
    pool: Pool, num_key: str, den_key: str, statistic: str = "", mode: str = ""
) -> EstimateReport:
    """Jackknife-bias-corrected ratio-of-sums estimate across replicates."""
    num = pool.scalar(num_key)
    den = pool.scalar(den_key)
    ns = float(num.sum())
    ds = float(den.sum())
    if ds == 0.0:
        raise StatsError("zero denominator in ratio estimate")
    theta = ns / ds
    r = len(num)
    if r > 1:
        leave_out_den = ds - den
        ok = leave_out_den != 0.0
        loo = np.where(ok, (ns - num) / np.where(ok, leave_out_den, 1.0), theta)
        theta_dot = float(loo.mean())
        stderr = math.sqrt((r - 1) / r * float(np.sum((loo - theta_dot) ** 2)))
        estimate = r * theta - (r - 1) * theta_dot  # jackknife bias correction
    else:
        stderr = 0.0
        estimate = theta
    # effective sample size of the denominator weights across replicates
    ess = ds * ds / float(np.sum(den**2)) if np.any(den) else 0.0
    return EstimateReport(
        statistic=statistic,
        mode=mode,
        estimate=estimate,
        stderr=stderr,
        ci_low=estimate - 1.959963984540054 * stderr,
        ci_high=estimate + 1.959963984540054 * stderr,
        effective_sample_size=ess,
        replicates=r,
    )


def bootstrap_stderr(
    pool: Pool, num_key: str, den_key: str, n_boot: int = 500, seed=0
) -> float:
    """Replicate-level bootstrap standard error of the ratio-of-sums."""
    num = pool.scalar(num_key)
    den = pool.scalar(den_key)
    r = len(num)
    rng = np.random.default_rng(subseed(seed, 0xB007))
    idx = rng.integers(0, r, size=(n_boot, r))
    ns = num[idx].sum(axis=1)
    ds = den[idx].sum(axis=1)
    ok = ds != 0
    vals = ns[ok] / ds[ok]
    return float(vals.std(ddof=1))


# ---------------------------------------------------------------------------
# goodness of fit


def _effective_n(weights) -> float:
    w = np.asarray(weights, dtype=float)
    s = float(w.sum())
    return s * s / float(np.sum(w * w))


def gof_ks(sample, cdf, weights=None, description: str = "") -> GofReport:
    """One-sample Kolmogorov-Smirnov test against a reference CDF.

    With weights, the weighted empirical CDF is compared and the sample size
    is replaced by the effective sample size (asymptotic approximation).
    """
    x = np.asarray(sample, dtype=float)
    if len(x) < 50:
        raise StatsError("KS test needs a sample of size >= 50")
    order = np.argsort(x)
    x = x[order]
    if weights is None:
        w = np.full(len(x), 1.0 / len(x))
        n_eff = float(len(x))
    else:
        w = np.asarray(weights, dtype=float)[order]
        n_eff = _effective_n(w)
        w = w / w.sum()
    f = np.asarray(cdf(x), dtype=float)
    ecdf_hi = np.cumsum(w)
    ecdf_lo = ecdf_hi - w
    d = float(np.max(np.maximum(np.abs(ecdf_hi - f), np.abs(f - ecdf_lo))))
    arg = d * (math.sqrt(n_eff) + 0.12 + 0.11 / math.sqrt(n_eff))
    p = float(special.kolmogorov(arg))
    return GofReport("ks", d, p, description)


def gof_ks_2samp(a, b, description: str = "") -> GofReport:
    res = sps.ks_2samp(np.asarray(a, float), np.asarray(b, float), method="asymp")
    return GofReport("ks", float(res.statistic), float(res.pvalue), description)


def gof_chi2(
    counts_or_sample,
    expected_probs=None,
    *,
    bins=None,
    weights=None,
    description: str = "",
) -> GofReport:
    """Chi-square test.

    Either pass observed counts plus expected probabilities, or a raw sample
    with ``bins`` (monotone edges) and expected probabilities per bin.  With
    weights, counts are weighted masses rescaled to the effective sample
    size.
    """
    if expected_probs is None:
        raise StatsError("expected probabilities are required")
    exp_p = np.asarray(expected_probs, dtype=float)
    if bins is not None:
        x = np.asarray(counts_or_sample, dtype=float)
        if len(x) == 0:
            raise StatsError("empty sample")
        if weights is None:
            obs, _ = np.histogram(x, bins=bins)
            obs = obs.astype(float)
            n = float(len(x))
        else:
            w = np.asarray(weights, dtype=float)
            obs, _ = np.histogram(x, bins=bins, weights=w)
            n = _effective_n(w)
            obs = obs / w.sum() * n
    else:
        obs = np.asarray(counts_or_sample, dtype=float)
        n = float(obs.sum())
        if n == 0:
            raise StatsError("empty sample")
    if len(obs) != len(exp_p):
        raise StatsError("bin count mismatch")
    expected = n * exp_p
    if np.any(expected <= 0):
        raise StatsError("expected bin masses must be positive")
    stat = float(np.sum((obs - expected) ** 2 / expected))
    dof = len(obs) - 1
    p = float(sps.chi2.sf(stat, dof))
    return GofReport("chi2", stat, p, description)


def poisson_dispersion(counts, description: str = "") -> GofReport:
    """Two-sided dispersion test: (n-1) s^2 / mean ~ chi2(n-1) under Poisson."""
    c = np.asarray(counts, dtype=float)
    if len(c) < 2:
        raise StatsError("dispersion test needs >= 2 counts")
    mean = float(c.mean())
    if mean == 0.0:
        raise StatsError("zero mean count")
    stat = float((len(c) - 1) * c.var(ddof=1) / mean)
    dof = len(c) - 1
    p = 2.0 * min(float(sps.chi2.sf(stat, dof)), float(sps.chi2.cdf(stat, dof)))
    return GofReport("poisson-dispersion", stat, min(p, 1.0), description)


def dispersion_index(counts) -> float:
    c = np.asarray(counts, dtype=float)
    return float(c.var(ddof=1) / c.mean())


def holm(p_values, alpha: float = 0.01):
    """Holm step-down correction: returns (reject flags, adjusted p-values)."""
    p = np.asarray(p_values, dtype=float)
    m = len(p)
    order = np.argsort(p)
    adj = np.empty(m)
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, (m - rank) * p[idx])
        adj[idx] = min(1.0, running)
    return adj <= alpha, adj


# simplex-uniformity binning ------------------------------------------------


def simplex_uniform_bins(births, t: float, n1: int = 5, n2: int = 2):
    """Map ordered birth pairs (b1, b2) on {0 < b1 < b2 < t} to bin indices.

    Under the uniform law on the simplex, z1 = (b2/t)^2 and z2 = b1/b2 are
    independent uniforms, so an (n1 x n2) grid over (z1, z2) gives
    equal-probability bins.
    """
    b = np.asarray(births, dtype=float)
    z1 = (b[:, 1] / t) ** 2
    z2 = b[:, 0] / b[:, 1]
    i1 = np.clip((z1 * n1).astype(int), 0, n1 - 1)
    i2 = np.clip((z2 * n2).astype(int), 0, n2 - 1)
    return i1 * n2 + i2, n1 * n2
