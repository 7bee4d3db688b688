"""Statistical comparisons used by the tests and the acceptance suites."""

from mrca_dynamics.stats.goodness import (
    BinnedTV,
    KsResult,
    LaplaceAccumulator,
    RateInterval,
    batch_dispersion,
    binned_tv,
    calibrate_ks,
    chi_square_gof,
    empirical_laplace,
    ks_comparison,
    ks_one_sample,
    ks_two_sample,
    poisson_rate_ci,
)

__all__ = [
    "KsResult",
    "RateInterval",
    "BinnedTV",
    "LaplaceAccumulator",
    "ks_one_sample",
    "ks_two_sample",
    "ks_comparison",
    "empirical_laplace",
    "binned_tv",
    "chi_square_gof",
    "poisson_rate_ci",
    "batch_dispersion",
    "calibrate_ks",
]
