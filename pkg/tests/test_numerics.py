"""
Unit tests for quadrature, monotone root finding and the divergence heuristic.

Author: Peter Kongstad
"""

import math

import numpy as np
import pytest

from mrca_dynamics.core.numerics import (
    detect_divergence,
    integrate,
    partial_integrals_near_zero,
    partial_integrals_to_infinity,
    safe_exp,
    solve_decreasing,
)
from mrca_dynamics.measures import CustomMeasure
from mrca_dynamics.utils.exceptions import (
    BracketNotFoundError,
    DomainError,
    QuadratureError,
    RootResidualError,
)


class TestSafeExp:
    """Test the underflow-guarded exponential."""

    def test_regular_values(self):
        """Test that ordinary exponents match math.exp."""
        assert safe_exp(1.0) == pytest.approx(math.e)
        assert safe_exp(0.0) == 1.0

    def test_underflow_is_exact_zero(self):
        """Test that exponents below the configured floor give exactly 0."""
        assert safe_exp(-800.0) == 0.0

    def test_overflow_is_inf(self):
        """Test that large exponents saturate to inf instead of raising."""
        assert safe_exp(800.0) == math.inf


class TestIntegrate:
    """Test adaptive quadrature."""

    def test_polynomial(self):
        """Test int_0^1 x dx = 1/2."""
        assert integrate(lambda x: x, 0.0, 1.0).value == pytest.approx(0.5, abs=1e-12)

    def test_infinite_upper_limit(self):
        """Test int_1^inf x^-2 dx = 1."""
        assert integrate(lambda x: x**-2, 1.0, math.inf).value == pytest.approx(1.0, abs=1e-10)

    def test_lifetime_integrand_shape(self):
        """Test int_0^inf (1 - e^-x) x^-1.5 dx = Gamma(1/2)/(1/2) = 2 sqrt(pi)."""

        def f(x):
            return -math.expm1(-x) * x**-1.5

        value = integrate(f, 0.0, 1.0).value + integrate(f, 1.0, math.inf).value
        assert value == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-8)

    def test_break_points(self):
        """Test that a kinked integrand is integrated accurately with break points."""
        value = integrate(lambda x: abs(x - 0.3), 0.0, 1.0, points=[0.3]).value
        assert value == pytest.approx(0.5 * 0.3**2 + 0.5 * 0.7**2, abs=1e-12)

    def test_empty_interval(self):
        """Test that a == b gives exactly zero."""
        assert integrate(lambda x: 1.0, 2.0, 2.0) == (0.0, 0.0)

    def test_reversed_limits(self):
        """Test that a > b raises DomainError."""
        with pytest.raises(DomainError, match="reversed"):
            integrate(lambda x: 1.0, 1.0, 0.0)

    def test_infinite_lower_limit(self):
        """Test that an infinite lower limit raises DomainError."""
        with pytest.raises(DomainError, match="finite"):
            integrate(lambda x: 1.0, -math.inf, 0.0)

    def test_divergent_integral_flagged(self):
        """Test that a divergent integral raises QuadratureError with a partial value."""
        with pytest.raises(QuadratureError) as excinfo:
            integrate(lambda x: 1.0 / x, 0.0, 1.0)
        assert excinfo.value.partial_value > 0


class TestSolveDecreasing:
    """Test monotone root finding with bracket expansion."""

    def test_reciprocal(self):
        """Test solving 2/x = 0.5."""
        assert solve_decreasing(lambda x: 2.0 / x, 0.5) == pytest.approx(4.0, rel=1e-12)

    def test_exponential(self):
        """Test solving exp(-x) = 0.25."""
        assert solve_decreasing(lambda x: math.exp(-x), 0.25) == pytest.approx(
            math.log(4.0), rel=1e-12
        )

    def test_bracket_below_hint(self):
        """Test that the bracket is grown downwards from the hint."""
        root = solve_decreasing(lambda x: 1.0 / x, 1e6, bracket_hint=1.0)
        assert root == pytest.approx(1e-6, rel=1e-10)

    def test_bounded_domain(self):
        """Test a root on a bounded domain (0, upper]."""
        root = solve_decreasing(lambda x: math.log(2.0 / x), math.log(4.0), upper=2.0)
        assert root == pytest.approx(0.5, rel=1e-12)

    def test_no_root_in_domain(self):
        """Test that a target below the range on (0, upper] raises BracketNotFoundError."""
        with pytest.raises(BracketNotFoundError, match="no root"):
            solve_decreasing(lambda x: 1.0 - x, -1.0, upper=1.0)

    def test_invalid_hint(self):
        """Test that a non-positive hint raises DomainError."""
        with pytest.raises(DomainError):
            solve_decreasing(lambda x: 1.0 / x, 1.0, bracket_hint=0.0)

    def test_jump_across_target_raises(self):
        """Test that a target inside a jump of g raises RootResidualError."""
        with pytest.raises(RootResidualError) as excinfo:
            solve_decreasing(lambda x: 2.0 if x < 1.0 else 1.0, 1.5)
        assert excinfo.value.root == pytest.approx(1.0)
        assert excinfo.value.residual == pytest.approx(0.5)

    def test_value_accuracy_widens_allowance(self):
        """Test that a residual within the stated accuracy of g is accepted."""

        def g(x):
            return 1.0 / x + (1e-11 if x < 2.0 else 0.0)

        target = 0.5 + 5e-12
        with pytest.raises(RootResidualError):
            solve_decreasing(g, target)
        assert solve_decreasing(g, target, value_rel_tol=1e-10) == pytest.approx(2.0, rel=1e-12)

    def test_table_inverse_round_trip(self, settings, table_rows):
        """Test |M(M^-1(u)) - u| on random u over and beyond a tail table."""
        meas = CustomMeasure.from_table(table_rows)
        rng = np.random.default_rng(20240611)
        for u in 10.0 ** rng.uniform(-6.0, 6.0, size=200):
            x = meas.inverse_tail(u)
            tolerance = settings.scaled_root_tol * (1.0 + u)
            assert abs(meas.tail(x) - u) <= tolerance, (u, x)


class TestDivergenceHeuristic:
    """Test the endpoint-divergence heuristic."""

    def test_geometric_growth_diverges(self):
        """Test that three successive growth steps declare divergence."""
        verdict = detect_divergence([1.0, 2.0, 4.0, 8.0])
        assert verdict.status == "diverges"
        assert verdict.value == math.inf
        assert not verdict.finite

    def test_infinite_partial_diverges(self):
        """Test that an infinite partial declares divergence immediately."""
        assert detect_divergence([1.0, math.inf]).status == "diverges"

    def test_settled_partials_converge(self):
        """Test that a negligible increment declares convergence."""
        verdict = detect_divergence([1.0, 1.5, 1.5 + 1e-14])
        assert verdict.status == "converges"
        assert verdict.value == pytest.approx(1.5)
        assert verdict.finite

    def test_slow_growth_inconclusive(self):
        """Test that neither criterion firing gives an inconclusive verdict."""
        assert detect_divergence([1.0, 1.1, 1.2, 1.3]).status == "inconclusive"

    def test_nan_inconclusive(self):
        """Test that a NaN partial gives an inconclusive verdict."""
        assert detect_divergence([1.0, math.nan]).status == "inconclusive"

    def test_integrable_singularity_at_zero(self):
        """Test that int_0^1 x^-1/2 converges to 2."""
        verdict = detect_divergence(partial_integrals_near_zero(lambda x: x**-0.5))
        assert verdict.status == "converges"
        assert verdict.value == pytest.approx(2.0, rel=1e-8)

    def test_logarithmic_divergence_at_zero(self):
        """Test that int_0^1 x^-1 diverges."""
        verdict = detect_divergence(partial_integrals_near_zero(lambda x: 1.0 / x))
        assert verdict.status == "diverges"

    def test_convergent_tail(self):
        """Test that int_1^inf x^-2 converges to 1."""
        verdict = detect_divergence(partial_integrals_to_infinity(lambda x: x**-2))
        assert verdict.status == "converges"
        assert verdict.value == pytest.approx(1.0, rel=1e-8)

    def test_divergent_tail(self):
        """Test that int_1^inf x^-1 diverges."""
        verdict = detect_divergence(partial_integrals_to_infinity(lambda x: 1.0 / x))
        assert verdict.status == "diverges"

    def test_refinement_count(self):
        """Test that ten partials are produced by default."""
        assert len(partial_integrals_near_zero(lambda x: x**-0.5)) == 10
