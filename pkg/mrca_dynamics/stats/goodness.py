"""
Goodness-of-fit machinery for Monte Carlo versus formula comparisons.

KS p-values use the asymptotic Kolmogorov distribution (scipy.stats,
method="asymp"); chi-square and Poisson intervals use scipy's chi2.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.core.numerics import integrate, solve_decreasing
from mrca_dynamics.models.results import ComparisonResult
from mrca_dynamics.utils.exceptions import DegenerateSampleError, DomainError

logger = get_logger(__name__)

MIN_KS_SAMPLE = 8
MIN_LAPLACE_SAMPLE = 100
MIN_EXPECTED_PER_BIN = 10
MIN_EXPECTED_CHI2 = 5.0


class KsResult(NamedTuple):
    """KS statistic D, asymptotic p-value and the sample size(s) behind them."""

    statistic: float
    p_value: float
    n: int


class RateInterval(NamedTuple):
    """Point estimate and confidence bounds of a Poisson rate."""

    rate: float
    lower: float
    upper: float
    dispersion: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


class BinnedTV(NamedTuple):
    """Binned total-variation estimate with its Monte Carlo error scale."""

    estimate: float
    mc_error: float
    bins: int


def _as_sample(samples, minimum: int, what: str) -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < minimum:
        raise DegenerateSampleError(f"{what} needs at least {minimum} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DegenerateSampleError(f"{what} received non-finite samples")
    return x


def _require_spread(x: np.ndarray, what: str) -> None:
    if np.all(x == x[0]):
        raise DegenerateSampleError(f"{what} received a constant sample")


def ks_one_sample(samples, cdf: Callable[[float], float]) -> KsResult:
    """
    One-sample KS test of samples against a continuous cdf.

    Raises:
        DegenerateSampleError: If n < 8 or the sample is constant.
    """
    x = _as_sample(samples, MIN_KS_SAMPLE, "ks_one_sample")
    _require_spread(x, "ks_one_sample")
    vector_cdf = np.vectorize(cdf, otypes=[float])
    result = stats.kstest(x, vector_cdf, method="asymp")
    return KsResult(float(result.statistic), float(result.pvalue), int(x.size))


def ks_two_sample(a, b) -> KsResult:
    """
    Two-sample KS test; n reported is the smaller of the two sizes.

    Raises:
        DegenerateSampleError: If either sample has n < 8 or both are constant.
    """
    x = _as_sample(a, MIN_KS_SAMPLE, "ks_two_sample")
    y = _as_sample(b, MIN_KS_SAMPLE, "ks_two_sample")
    _require_spread(np.concatenate((x, y)), "ks_two_sample")
    result = stats.ks_2samp(x, y, method="asymp")
    return KsResult(float(result.statistic), float(result.pvalue), int(min(x.size, y.size)))


def ks_comparison(
    name: str,
    samples,
    reference,
    significance: Optional[float] = None,
) -> ComparisonResult:
    """KS comparison of samples against a cdf callable or a second sample."""
    significance = get_settings().significance if significance is None else significance
    if callable(reference):
        result = ks_one_sample(samples, reference)
    else:
        result = ks_two_sample(samples, reference)
    passed = result.p_value >= significance
    logger.debug(f"KS {name}: D={result.statistic:.4g}, p={result.p_value:.4g}, n={result.n}")
    return ComparisonResult(name, result.statistic, result.p_value, result.n, passed)


def empirical_laplace(samples, thetas: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """
    Empirical Laplace transform mean(exp(-theta X)) with standard errors.

    Raises:
        DegenerateSampleError: If fewer than 100 samples are given.
    """
    x = _as_sample(samples, MIN_LAPLACE_SAMPLE, "empirical_laplace")
    acc = LaplaceAccumulator(tuple(float(t) for t in thetas))
    acc.update(x)
    return acc.estimates(), acc.standard_errors()


@dataclass
class LaplaceAccumulator:
    """
    Mergeable running sums for empirical Laplace transforms.

    Attributes:
        thetas: Transform arguments.
        n: Number of samples absorbed.
        sums: Per-theta sums of exp(-theta X).
        sums_sq: Per-theta sums of exp(-2 theta X).
    """

    thetas: tuple[float, ...]
    n: int = 0
    sums: Optional[np.ndarray] = field(default=None)
    sums_sq: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if any(t < 0 for t in self.thetas):
            raise ValueError("Laplace arguments must be non-negative")
        k = len(self.thetas)
        if self.sums is None:
            self.sums = np.zeros(k)
        if self.sums_sq is None:
            self.sums_sq = np.zeros(k)

    def update(self, samples) -> "LaplaceAccumulator":
        x = np.asarray(samples, dtype=float).ravel()
        values = np.exp(-np.outer(self.thetas, x))
        self.sums = self.sums + values.sum(axis=1)
        self.sums_sq = self.sums_sq + (values * values).sum(axis=1)
        self.n += int(x.size)
        return self

    def merge(self, other: "LaplaceAccumulator") -> "LaplaceAccumulator":
        if tuple(other.thetas) != tuple(self.thetas):
            raise ValueError("cannot merge accumulators over different theta grids")
        return LaplaceAccumulator(
            thetas=self.thetas,
            n=self.n + other.n,
            sums=self.sums + other.sums,
            sums_sq=self.sums_sq + other.sums_sq,
        )

    def estimates(self) -> np.ndarray:
        return self.sums / self.n

    def standard_errors(self) -> np.ndarray:
        if self.n < 2:
            return np.full(len(self.thetas), math.inf)
        mean = self.estimates()
        var = (self.sums_sq - self.n * mean * mean) / (self.n - 1)
        return np.sqrt(np.maximum(var, 0.0) / self.n)


def _quantile_from_density(density: Callable[[float], float]) -> Callable[[float], float]:
    """Quantile of a probability density on (0, inf) by inverting its survival integral."""
    value_rel_tol = get_settings().scaled_rel_tol

    def survival(x: float) -> float:
        return integrate(density, x, math.inf).value

    def quantile(p: float) -> float:
        return solve_decreasing(survival, 1.0 - p, value_rel_tol=value_rel_tol)

    return quantile


def binned_tv(
    samples,
    density: Callable[[float], float],
    bins: int = 50,
    quantile: Optional[Callable[[float], float]] = None,
) -> BinnedTV:
    """
    Total-variation distance between samples and an analytic law over equal-mass bins.

    Bin edges are quantiles of the law with the given density on (0, inf), found by
    inverting its survival integral; pass quantile when a closed form exists. Bins are
    widened until each expects at least 10 samples. The estimate is a lower bound of the
    true TV up to sampling noise, whose scale is reported as mc_error.

    Raises:
        DegenerateSampleError: If fewer than 20 samples leave room for two bins.
    """
    x = _as_sample(samples, 2 * MIN_EXPECTED_PER_BIN, "binned_tv")
    n = x.size
    bins = max(2, min(bins, n // MIN_EXPECTED_PER_BIN))
    if quantile is None:
        quantile = _quantile_from_density(density)
    edges = np.array([quantile(k / bins) for k in range(1, bins)])
    counts = np.bincount(np.searchsorted(edges, x, side="right"), minlength=bins)
    freq = counts / n
    estimate = 0.5 * float(np.abs(freq - 1.0 / bins).sum())
    mc_error = 0.5 * float(np.sqrt(freq * (1.0 - freq) / n).sum())
    return BinnedTV(estimate, mc_error, bins)


def _merge_small_bins(observed: list[float], expected: list[float]) -> tuple[list, list]:
    obs, exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= MIN_EXPECTED_CHI2:
            obs.append(acc_o)
            exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if exp:
            obs[-1] += acc_o
            exp[-1] += acc_e
        else:
            obs.append(acc_o)
            exp.append(acc_e)
    return obs, exp


def chi_square_gof(
    samples,
    cdf: Callable[[float], float],
    edges: Sequence[float],
    name: str = "chi_square",
    significance: Optional[float] = None,
) -> ComparisonResult:
    """
    Binned chi-square test of samples against a cdf.

    Args:
        samples: Observations.
        cdf: Distribution function of the null law.
        edges: Increasing interior cut points; the outer bins are open-ended.
        name: Label of the comparison.
        significance: Rejection level, defaults to the configured one.
    """
    significance = get_settings().significance if significance is None else significance
    x = _as_sample(samples, MIN_KS_SAMPLE, "chi_square_gof")
    cuts = np.asarray(sorted(edges), dtype=float)
    probs = np.diff(np.concatenate(([0.0], [cdf(e) for e in cuts], [1.0])))
    probs = np.clip(probs, 0.0, None)
    counts = np.bincount(np.searchsorted(cuts, x, side="left"), minlength=len(probs))
    obs, exp = _merge_small_bins(counts.tolist(), (probs / probs.sum() * x.size).tolist())
    if len(obs) < 2:
        raise DegenerateSampleError("chi_square_gof needs at least two usable bins")
    result = stats.chisquare(np.asarray(obs), np.asarray(exp))
    passed = float(result.pvalue) >= significance
    statistic, p_value = float(result.statistic), float(result.pvalue)
    return ComparisonResult(name, statistic, p_value, int(x.size), passed)


def poisson_rate_ci(
    count: int, exposure: float, confidence: float = 0.99, dispersion: float = 1.0
) -> RateInterval:
    """
    Exact (Garwood) confidence interval for a Poisson rate.

    A dispersion above 1 turns it into a quasi-Poisson interval: the count is
    treated as dispersion times a Poisson variable with count/dispersion events.
    """
    if count < 0 or not exposure > 0:
        raise DomainError(f"need count >= 0 and exposure > 0, got {count}, {exposure}")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    phi = max(1.0, float(dispersion))
    k = count / phi
    alpha = 1.0 - confidence
    lower = 0.0 if k == 0 else stats.chi2.ppf(alpha / 2.0, 2.0 * k) / 2.0
    upper = stats.chi2.ppf(1.0 - alpha / 2.0, 2.0 * k + 2.0) / 2.0
    scale = phi / exposure
    return RateInterval(count / exposure, float(lower * scale), float(upper * scale), phi)


def batch_dispersion(counts: Sequence[int], exposures: Sequence[float]) -> float:
    """Pearson dispersion of per-batch counts around a common rate, floored at 1."""
    c = np.asarray(counts, dtype=float)
    e = np.asarray(exposures, dtype=float)
    if c.size < 2:
        return 1.0
    rate = c.sum() / e.sum()
    if rate == 0.0:
        return 1.0
    expected = rate * e
    phi = float(np.sum((c - expected) ** 2 / expected) / (c.size - 1))
    return max(1.0, phi)


def calibrate_ks(
    rng: np.random.Generator, n_repetitions: int = 200, n: int = 1000
) -> ComparisonResult:
    """Null calibration: KS p-values of uniform samples must themselves look uniform."""
    p_values = [ks_one_sample(rng.random(n), lambda u: u).p_value for _ in range(n_repetitions)]
    return ks_comparison("ks_null_calibration", p_values, lambda u: min(max(u, 0.0), 1.0))
