"""
Tests for the goodness-of-fit helpers.

Author: Peter Kongstad
"""

import math

import numpy as np
import pytest
from scipy import stats

from mrca_dynamics.simulation import make_rng
from mrca_dynamics.stats import (
    LaplaceAccumulator,
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
from mrca_dynamics.utils.exceptions import DegenerateSampleError, DomainError


class TestKolmogorovSmirnov:
    """Test the KS wrappers."""

    def test_one_sample_accepts_true_law(self, rng):
        """Test uniform samples against the uniform cdf."""
        result = ks_one_sample(rng.random(2000), lambda u: u)
        assert result.n == 2000
        assert result.p_value > 1e-3

    def test_one_sample_rejects_wrong_law(self, rng):
        """Test squared uniforms against the uniform cdf."""
        result = ks_one_sample(rng.random(2000) ** 2, lambda u: u)
        assert result.p_value < 1e-6

    def test_two_sample(self, rng):
        """Test equal and shifted normal samples."""
        a, b = rng.normal(size=800), rng.normal(size=500)
        same = ks_two_sample(a, b)
        assert same.n == 500
        assert same.p_value > 1e-3
        shifted = ks_two_sample(a, b + 1.0)
        assert shifted.p_value < 1e-6

    @pytest.mark.parametrize(
        "samples, match",
        [([0.1, 0.2, 0.3], "at least 8"), ([0.5] * 20, "constant"), ([0.1] * 9 + [np.nan], "")],
    )
    def test_degenerate_samples(self, samples, match):
        """Test DegenerateSampleError on short, constant and non-finite samples."""
        with pytest.raises(DegenerateSampleError, match=match):
            ks_one_sample(samples, lambda u: u)

    def test_comparison_result(self, rng):
        """Test that ks_comparison dispatches on callables and samples."""
        one = ks_comparison("uniform", rng.random(500), lambda u: u, significance=1e-3)
        two = ks_comparison("pair", rng.random(500), rng.random(400), significance=1e-3)
        assert one.comparison == "uniform" and one.passed
        assert two.comparison == "pair" and two.n == 400
        forced = ks_comparison("strict", rng.random(500), lambda u: u, significance=1.0)
        assert not forced.passed

    def test_null_calibration(self):
        """Test that KS p-values under the null look uniform."""
        result = calibrate_ks(make_rng(3), n_repetitions=60, n=200)
        assert result.comparison == "ks_null_calibration"
        assert result.passed


class TestLaplace:
    """Test empirical Laplace transforms."""

    def test_exponential_transform(self, rng):
        """Test E exp(-theta X) = 1/(1 + theta) for unit exponentials."""
        estimates, errors = empirical_laplace(rng.exponential(size=20000), [0.5, 2.0])
        for est, se, theta in zip(estimates, errors, [0.5, 2.0]):
            assert abs(est - 1.0 / (1.0 + theta)) <= 5.0 * se

    def test_too_few_samples(self, rng):
        """Test that fewer than 100 samples are refused."""
        with pytest.raises(DegenerateSampleError):
            empirical_laplace(rng.random(50), [1.0])

    def test_accumulator_merge(self, rng):
        """Test that merged accumulators equal one accumulator over all samples."""
        x = rng.exponential(size=300)
        whole = LaplaceAccumulator((0.0, 1.0)).update(x)
        merged = (
            LaplaceAccumulator((0.0, 1.0))
            .update(x[:100])
            .merge(LaplaceAccumulator((0.0, 1.0)).update(x[100:]))
        )
        assert merged.n == 300
        assert np.allclose(merged.estimates(), whole.estimates())
        assert np.allclose(merged.standard_errors(), whole.standard_errors())
        assert merged.estimates()[0] == pytest.approx(1.0)

    def test_merge_mismatch(self):
        """Test that different theta grids cannot be merged."""
        with pytest.raises(ValueError, match="theta"):
            LaplaceAccumulator((1.0,)).merge(LaplaceAccumulator((2.0,)))

    def test_negative_theta(self):
        """Test that negative arguments are rejected."""
        with pytest.raises(ValueError):
            LaplaceAccumulator((-1.0,))

    def test_standard_error_single_sample(self):
        """Test that a single sample has infinite standard error."""
        acc = LaplaceAccumulator((1.0,)).update([0.3])
        assert math.isinf(acc.standard_errors()[0])


def exp_density(x):
    """Unit exponential density."""
    return math.exp(-x)


def exp_quantile(p):
    """Unit exponential quantile."""
    return -math.log1p(-p)


class TestBinnedTV:
    """Test the binned total-variation estimate."""

    def test_matching_law(self, rng):
        """Test that exponential samples are close to the exponential law."""
        samples = rng.exponential(size=10000)
        result = binned_tv(samples, exp_density, quantile=exp_quantile)
        assert result.bins == 50
        assert result.estimate < 0.06

    def test_edges_from_density(self, rng):
        """Test that edges inverted from the density match the closed-form quantile."""
        samples = rng.exponential(size=2000)
        from_density = binned_tv(samples, exp_density, bins=10)
        closed_form = binned_tv(samples, exp_density, bins=10, quantile=exp_quantile)
        assert from_density.bins == closed_form.bins == 10
        assert from_density.estimate == pytest.approx(closed_form.estimate, abs=1e-3)

    def test_disjoint_half(self, rng):
        """Test samples from the lower half of the law."""
        samples = rng.exponential(size=10000)
        lower = samples[samples < math.log(2.0)]
        result = binned_tv(lower, exp_density, quantile=exp_quantile)
        assert result.estimate == pytest.approx(0.5, abs=0.05)

    def test_bins_shrink_with_sample(self, rng):
        """Test that each bin expects at least ten samples."""
        result = binned_tv(rng.exponential(size=200), exp_density, quantile=exp_quantile)
        assert result.bins == 20

    def test_too_few_samples(self, rng):
        """Test that fewer than two bins of ten samples raise DegenerateSampleError."""
        with pytest.raises(DegenerateSampleError, match="binned_tv"):
            binned_tv(rng.exponential(size=15), exp_density, quantile=exp_quantile)


class TestChiSquare:
    """Test the binned chi-square goodness of fit."""

    def test_accepts_true_law(self, rng):
        """Test exponential samples against the exponential cdf."""
        result = chi_square_gof(
            rng.exponential(size=3000), stats.expon.cdf, [0.25, 0.5, 1.0, 2.0], "expon"
        )
        assert result.comparison == "expon"
        assert result.passed

    def test_rejects_wrong_law(self, rng):
        """Test exponential samples with mean 2 against the unit exponential."""
        result = chi_square_gof(rng.exponential(2.0, size=3000), stats.expon.cdf, [0.5, 1.0, 2.0])
        assert not result.passed

    def test_single_bin(self, rng):
        """Test that one usable bin is degenerate."""
        with pytest.raises(DegenerateSampleError, match="two usable bins"):
            chi_square_gof(rng.random(100), lambda u: u, [])


class TestPoissonRate:
    """Test Poisson rate intervals and batch dispersion."""

    def test_zero_count(self):
        """Test the exact upper bound -log(0.005)/exposure at zero events."""
        ci = poisson_rate_ci(0, 10.0)
        assert ci.rate == 0.0
        assert ci.lower == 0.0
        assert ci.upper == pytest.approx(-math.log(0.005) / 10.0)

    def test_contains_rate(self):
        """Test that the interval brackets its point estimate."""
        ci = poisson_rate_ci(100, 50.0)
        assert ci.rate == 2.0
        assert ci.contains(2.0)
        assert not ci.contains(4.0)

    def test_dispersion_widens(self):
        """Test that overdispersion widens the interval."""
        plain = poisson_rate_ci(100, 50.0)
        wide = poisson_rate_ci(100, 50.0, dispersion=4.0)
        assert wide.dispersion == 4.0
        assert wide.upper - wide.lower > plain.upper - plain.lower
        assert poisson_rate_ci(100, 50.0, dispersion=0.5).dispersion == 1.0

    @pytest.mark.parametrize(
        "count, exposure, confidence", [(-1, 1.0, 0.99), (1, 0.0, 0.99), (1, 1.0, 1.0)]
    )
    def test_invalid(self, count, exposure, confidence):
        """Test DomainError on invalid arguments."""
        with pytest.raises(DomainError):
            poisson_rate_ci(count, exposure, confidence)

    def test_batch_dispersion(self):
        """Test the Pearson dispersion and its floor at 1."""
        assert batch_dispersion([10, 10, 10], [1.0, 1.0, 1.0]) == 1.0
        assert batch_dispersion([0, 100, 0, 100], [1.0] * 4) == pytest.approx(200.0 / 3.0)
        assert batch_dispersion([5], [1.0]) == 1.0
        assert batch_dispersion([0, 0], [1.0, 2.0]) == 1.0
