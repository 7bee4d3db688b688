"""
Tests for path, chain and batch simulation.

Author: Peter Kongstad
"""

import math

import numpy as np
import pytest

from mrca_dynamics.kernels import stable_beta_limit_cdf, stationary_cdf
from mrca_dynamics.measures import CustomMeasure, HyperbolicMeasure
from mrca_dynamics.models.results import PathSample
from mrca_dynamics.simulation import (
    RngStream,
    chain_invariant_check,
    make_rng,
    marginal,
    next_peak,
    next_trough,
    sample_stationary,
    simulate_batch,
    simulate_jump_chain,
    simulate_path,
    simulate_stationary,
    to_log_scale,
)
from mrca_dynamics.stats import ks_one_sample, ks_two_sample
from mrca_dynamics.utils.exceptions import DomainError


class TestRngStreams:
    """Test reproducible random streams."""

    def test_same_stream_replays(self):
        """Test that identical (seed, stream) pairs replay identical draws."""
        assert np.array_equal(make_rng(7, 3).random(5), make_rng(7, 3).random(5))

    def test_streams_differ(self):
        """Test that distinct stream ids give distinct sequences."""
        assert not np.array_equal(make_rng(7, 0).random(5), make_rng(7, 1).random(5))

    def test_negative_seed_rejected(self):
        """Test that negative seeds are rejected."""
        with pytest.raises(ValueError, match="non-negative"):
            RngStream(-1)


class TestPathSample:
    """Test the saw-tooth path container."""

    @pytest.fixture
    def path(self):
        """A hand-built path with two jumps."""
        return PathSample(
            x0=1.0,
            horizon=5.0,
            jump_times=[1.0, 3.0],
            peaks=[2.0, 3.5],
            troughs=[1.5, 0.5],
        )

    def test_value_at(self, path):
        """Test right-continuous evaluation of the saw-tooth."""
        assert path.value_at(0.0) == 1.0
        assert path.value_at(0.5) == 1.5
        assert path.value_at(1.0) == 1.5
        assert path.value_at(2.0) == 2.5
        assert path.value_at(5.0) == 2.5
        assert np.allclose(path.value_at([0.5, 3.0, 4.0]), [1.5, 0.5, 1.5])

    def test_value_at_outside_horizon(self, path):
        """Test that times outside [0, horizon] are rejected."""
        with pytest.raises(ValueError):
            path.value_at(6.0)

    def test_resolved_jump_count(self, path):
        """Test counting exact-mechanism jumps in a time window."""
        assert path.resolved_jump_count() == 2
        assert path.resolved_jump_count(1.0, 5.0) == 1
        path.coarse[1] = True
        assert path.resolved_jump_count() == 1

    def test_drift_residual(self, path):
        """Test that a consistent path reconstructs its peaks."""
        assert path.drift_residual() == 0.0

    def test_gaps_and_sizes(self, path):
        """Test inter-jump gaps and jump sizes."""
        assert np.allclose(path.gaps(), [1.0, 2.0])
        assert np.allclose(path.jump_sizes(), [0.5, 3.0])

    def test_truncate(self, path):
        """Test restriction to a shorter horizon."""
        short = path.truncate(2.0)
        assert short.n_jumps == 1
        assert short.horizon == 2.0

    def test_unequal_lengths(self):
        """Test that mismatched arrays are rejected."""
        with pytest.raises(ValueError, match="equal length"):
            PathSample(x0=0.0, horizon=1.0, jump_times=[0.5], peaks=[], troughs=[])


class TestJumpSampling:
    """Test the exact jump mechanism."""

    def test_next_peak_stable(self, stable_one):
        """Test L = M^-1(U M(x)) with a fixed uniform."""

        class FixedUniform:
            def random(self):
                return 0.5

        # U = 1 - 0.5, M(1) = 2, M^-1(1) = 2
        assert next_peak(stable_one, 1.0, FixedUniform()) == pytest.approx(2.0)

    def test_next_peak_above_state(self, hyperbolic_two, rng):
        """Test that peaks never lie below the current state."""
        assert all(next_peak(hyperbolic_two, 0.8, rng) >= 0.8 for _ in range(200))

    def test_next_trough_below_peak(self, hyperbolic_two, rng):
        """Test that troughs lie strictly below the peak."""
        assert all(0.0 <= next_trough(hyperbolic_two, 1.2, rng) < 1.2 for _ in range(200))

    def test_next_peak_domain(self, stable_one, rng):
        """Test that x = 0 has no next peak."""
        with pytest.raises(DomainError):
            next_peak(stable_one, 0.0, rng)


class TestSimulatePath:
    """Test path simulation."""

    def test_path_consistency(self, hyperbolic_two, rng):
        """Test the drift between jumps and the ordering of jump data."""
        path = simulate_path(hyperbolic_two, 1.0, 50.0, rng)
        assert path.n_jumps > 0
        assert np.all(np.diff(path.jump_times) > 0)
        assert np.all(path.troughs < path.peaks)
        assert np.all(path.troughs >= 0.0)
        assert path.drift_residual() < 1e-12
        assert path.jump_times[-1] <= 50.0

    def test_reproducible(self, hyperbolic_two):
        """Test that equal seeds reproduce the same path."""
        a = simulate_path(hyperbolic_two, 1.0, 10.0, make_rng(1))
        b = simulate_path(hyperbolic_two, 1.0, 10.0, make_rng(1))
        assert np.array_equal(a.jump_times, b.jump_times)
        assert np.array_equal(a.troughs, b.troughs)

    def test_start_at_zero(self, stable_one, rng):
        """Test that a path from 0 is stepped by the kernel near zero."""
        path = simulate_path(stable_one, 0.0, 1.0, rng)
        assert path.zero_intervals
        assert path.zero_intervals[0][0] == 0.0
        assert 0.0 <= path.value_at(1.0) <= 1.0

    def test_marginal_from_zero(self, stable_one):
        """Test that A_1 / 1 from 0 follows Beta(2, 1)."""
        rng = make_rng(2024)
        values = [marginal(simulate_path(stable_one, 0.0, 1.0, rng), 1.0) for _ in range(1500)]
        result = ks_one_sample(values, lambda u: stable_beta_limit_cdf(1.0, min(max(u, 0.0), 1.0)))
        assert result.p_value > 1e-3

    def test_invalid_arguments(self, stable_one, rng):
        """Test that invalid start states and horizons are rejected."""
        with pytest.raises(DomainError):
            simulate_path(stable_one, -1.0, 1.0, rng)
        with pytest.raises(DomainError):
            simulate_path(stable_one, 1.0, 0.0, rng)
        with pytest.raises(DomainError):
            simulate_path(stable_one, 1.0, 1.0, rng, t0=0.0)

    def test_path_reaches_zero(self, zero_reachable, rng):
        """Test that a measure with finite int_0 M produces jumps to zero."""
        path = simulate_path(zero_reachable, 1.0, 200.0, rng)
        assert np.any(path.troughs == 0.0) or path.zero_intervals


class TestRestart:
    """Test the Markov property of simulated paths."""

    @pytest.mark.slow
    @pytest.mark.parametrize("measure", ["stable_one", "hyperbolic_two"])
    def test_restart_matches_continuation(self, request, measure):
        """Test that A_(s+t) along a path has the law of A_t restarted from A_s."""
        meas = request.getfixturevalue(measure)
        s, t = 1.5, 2.0
        continued, restarted = [], []
        for k in range(600):
            path = simulate_path(meas, 1.0, s + t, make_rng(31, 2 * k))
            continued.append(path.value_at(s + t))
            fresh = simulate_path(meas, path.value_at(s), t, make_rng(31, 2 * k + 1))
            restarted.append(fresh.value_at(t))
        assert ks_two_sample(continued, restarted).p_value > 1e-3


class TestStationarySampling:
    """Test stationary draws and stationary paths."""

    def test_stationary_draws(self, pareto):
        """Test that stationary draws follow exp(-1/x)."""
        rng = make_rng(99)
        draws = [sample_stationary(pareto, rng) for _ in range(2000)]
        result = ks_one_sample(draws, lambda x: stationary_cdf(pareto, x) if x > 0 else 0.0)
        assert result.p_value > 1e-3

    def test_stationary_marginal(self, pareto):
        """Test that A_1 of stationary paths is again stationary."""
        rng = make_rng(5)
        values = [simulate_stationary(pareto, 1.0, rng).value_at(1.0) for _ in range(1500)]
        result = ks_one_sample(values, lambda x: stationary_cdf(pareto, x) if x > 0 else 0.0)
        assert result.p_value > 1e-3

    def test_log_scale(self, stable_one, rng):
        """Test the log time change on a path from 0."""
        path = simulate_path(stable_one, 0.0, math.exp(3.0), rng)
        values = to_log_scale(path, [0.0, 1.0, 2.0, 3.0])
        assert values.shape == (4,)
        assert np.all(values >= 0.0)

    def test_log_scale_beyond_horizon(self, stable_one, rng):
        """Test that exp(u) beyond the horizon is rejected."""
        path = simulate_path(stable_one, 0.0, 2.0, rng)
        with pytest.raises(DomainError):
            to_log_scale(path, [1.0])


class TestJumpChain:
    """Test the alternating peak/trough chain."""

    def test_peak_start(self, hyperbolic_two, rng):
        """Test that a peak start keeps its value as L_0."""
        chain = simulate_jump_chain(hyperbolic_two, "peak", 1.5, 50, rng)
        assert chain.peaks[0] == 1.5
        assert chain.n == 50
        assert np.all(chain.troughs < chain.peaks)
        assert np.all(chain.peaks[1:] > chain.troughs[:-1])

    def test_interleaved(self, hyperbolic_two, rng):
        """Test the interleaved L_0, R_0, L_1, ... view."""
        chain = simulate_jump_chain(hyperbolic_two, "trough", 0.5, 10, rng)
        sequence = chain.interleaved()
        assert sequence.size == 20
        assert sequence[1] == chain.troughs[0]

    def test_absorbed_at_zero(self, zero_reachable, rng):
        """Test that a chain stops when a trough lands on 0."""
        chain = simulate_jump_chain(zero_reachable, "peak", 5.0, 10_000, rng)
        assert chain.absorbed_at_zero
        assert len(chain.peaks) == len(chain.troughs) + 1

    def test_invalid_start(self, hyperbolic_two, rng):
        """Test that invalid chain arguments are rejected."""
        with pytest.raises(DomainError):
            simulate_jump_chain(hyperbolic_two, "middle", 1.0, 10, rng)
        with pytest.raises(DomainError):
            simulate_jump_chain(hyperbolic_two, "peak", 0.0, 10, rng)

    @pytest.mark.slow
    def test_invariant_laws(self, hyperbolic_two):
        """Test that thinned chain values follow the normalized invariant densities."""
        chain = simulate_jump_chain(hyperbolic_two, "peak", 1.0, 20_000, make_rng(11))
        peaks = chain.peaks[1000::10]
        troughs = chain.troughs[1000::10]
        assert chain_invariant_check(hyperbolic_two, "peak", peaks).passed
        assert chain_invariant_check(hyperbolic_two, "trough", troughs).passed


class TestBatch:
    """Test batch simulation over streams."""

    def test_batch_in_process(self, hyperbolic_two):
        """Test that a batch returns one successful result per stream, in order."""
        results = simulate_batch(hyperbolic_two, 1.0, 5.0, 4, seed=3)
        assert [r["stream"] for r in results] == [0, 1, 2, 3]
        assert all(r["status"] == "success" for r in results)
        assert all(r["path"].stream == r["stream"] for r in results)

    def test_batch_matches_single_stream(self, hyperbolic_two):
        """Test that each batch path equals the path simulated on its own stream."""
        results = simulate_batch(hyperbolic_two, 1.0, 5.0, 3, seed=3)
        single = simulate_path(hyperbolic_two, 1.0, 5.0, RngStream(3, 2).generator())
        assert np.array_equal(results[2]["path"].jump_times, single.jump_times)

    def test_stationary_start(self, pareto):
        """Test that x0 = None starts every path from the stationary law."""
        results = simulate_batch(pareto, None, 1.0, 3, seed=0)
        assert all(r["status"] == "success" for r in results)

    def test_errors_are_captured(self, stable_one):
        """Test that a failing path is reported rather than raised."""
        results = simulate_batch(stable_one, None, 1.0, 2, seed=0)
        assert all(r["status"] == "error" for r in results)
        assert all(r["path"] is None for r in results)

    def test_empty_batch(self, hyperbolic_two):
        """Test that zero paths gives an empty result."""
        assert simulate_batch(hyperbolic_two, 1.0, 1.0, 0, seed=0) == []

    def test_callable_measure_runs_in_process(self):
        """Test that callable measures fall back to one worker."""
        meas = CustomMeasure.from_callable(
            lambda x: 2.0 / x if x <= 1.0 else 2.0 * math.exp(1.0 - x)
        )
        results = simulate_batch(meas, 1.0, 2.0, 2, seed=0, n_workers=2)
        assert all(r["status"] == "success" for r in results)

    @pytest.mark.slow
    @pytest.mark.integration
    def test_worker_pool_matches_in_process(self):
        """Test that results do not depend on the number of workers."""
        meas = HyperbolicMeasure(alpha=2.0)
        serial = simulate_batch(meas, 1.0, 5.0, 4, seed=8, n_workers=1)
        pooled = simulate_batch(meas, 1.0, 5.0, 4, seed=8, n_workers=2)
        for a, b in zip(serial, pooled):
            assert np.array_equal(a["path"].jump_times, b["path"].jump_times)
