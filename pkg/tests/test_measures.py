"""
Unit tests for lifetime measures, their specifications and the regime classification.

Author: Peter Kongstad
"""

import json
import logging
import math

import numpy as np
import pytest

from mrca_dynamics.measures import (
    CustomMeasure,
    HyperbolicMeasure,
    LogStableMeasure,
    ParetoMeasure,
    StableMeasure,
    build_measure,
    classify,
)
from mrca_dynamics.models.params import (
    HyperbolicSpec,
    ParetoSpec,
    StableSpec,
    dump_measure_spec,
    parse_measure_spec,
)
from mrca_dynamics.utils.exceptions import (
    ConfigurationError,
    DomainError,
    NoSolutionError,
    NoStationaryLawError,
)

BUILTINS = [
    StableMeasure(beta=1.0),
    StableMeasure(beta=0.5),
    HyperbolicMeasure(alpha=0.5),
    HyperbolicMeasure(alpha=2.0),
    ParetoMeasure(a=1.0, p=2.0),
    ParetoMeasure(a=1.0, p=0.5),
    LogStableMeasure(beta=0.5),
]


class TestMeasureSpec:
    """Test measure specifications and their JSON form."""

    def test_parse_json_text(self):
        """Test parsing a stable spec from JSON text."""
        spec = parse_measure_spec('{"type": "stable", "beta": 0.5}')
        assert spec == StableSpec(beta=0.5)

    def test_parse_mapping(self):
        """Test parsing a Pareto spec from a dict."""
        assert parse_measure_spec({"type": "pareto", "a": 1.0, "p": 2.0}) == ParetoSpec(a=1, p=2)

    def test_dump_roundtrip_shape(self):
        """Test that a spec dumps to the documented JSON object."""
        assert dump_measure_spec(HyperbolicSpec(alpha=2.0)) == {"type": "hyperbolic", "alpha": 2.0}

    def test_beta_above_one_rejected(self):
        """Test that beta > 1 is rejected."""
        with pytest.raises(ConfigurationError, match="Invalid measure"):
            parse_measure_spec({"type": "stable", "beta": 1.5})

    def test_nonpositive_parameter_rejected(self):
        """Test that non-positive parameters are rejected."""
        with pytest.raises(ConfigurationError):
            parse_measure_spec({"type": "pareto", "a": 0.0, "p": 2.0})

    def test_unknown_type_rejected(self):
        """Test that an unknown type tag is rejected."""
        with pytest.raises(ConfigurationError):
            parse_measure_spec({"type": "gamma", "k": 1.0})

    def test_invalid_json_rejected(self):
        """Test that malformed JSON raises ConfigurationError."""
        with pytest.raises(ConfigurationError, match="not valid JSON"):
            parse_measure_spec("{type: stable")

    def test_rejection_is_logged(self, caplog, monkeypatch):
        """Test that a rejected payload is logged at debug level."""
        monkeypatch.setattr(logging.getLogger("mrca_dynamics"), "propagate", True)
        caplog.set_level(logging.DEBUG, logger="mrca_dynamics.models.params")
        with pytest.raises(ConfigurationError):
            parse_measure_spec({"type": "stable", "beta": 1.5})
        assert "failed 1 checks" in caplog.text

    def test_extra_fields_rejected(self):
        """Test that unexpected fields are rejected."""
        with pytest.raises(ConfigurationError):
            parse_measure_spec({"type": "stable", "beta": 1.0, "alpha": 2.0})

    def test_table_must_decrease(self):
        """Test that a tail table with increasing M is rejected."""
        rows = [[0.1, 1.0], [1.0, 2.0], [2.0, 3.0], [3.0, 4.0]]
        with pytest.raises(ConfigurationError, match="decreasing"):
            parse_measure_spec({"type": "custom", "tail_table": rows})

    def test_table_needs_rows(self):
        """Test that a tail table needs at least four rows."""
        with pytest.raises(ConfigurationError, match="at least 4"):
            parse_measure_spec({"type": "custom", "tail_table": [[1.0, 1.0], [2.0, 0.5]]})


class TestBuildMeasure:
    """Test the measure registry."""

    def test_build_from_json(self):
        """Test building each built-in family from JSON text."""
        assert isinstance(build_measure('{"type": "stable", "beta": 1}'), StableMeasure)
        assert isinstance(build_measure('{"type": "hyperbolic", "alpha": 2}'), HyperbolicMeasure)
        assert isinstance(build_measure('{"type": "pareto", "a": 1, "p": 2}'), ParetoMeasure)
        assert isinstance(build_measure('{"type": "logstable", "beta": 0.5}'), LogStableMeasure)

    def test_build_custom_table(self, table_rows):
        """Test building a custom measure from a tail table."""
        meas = build_measure({"type": "custom", "tail_table": table_rows})
        assert isinstance(meas, CustomMeasure)
        assert meas.table is not None

    def test_build_passes_measures_through(self, stable_one):
        """Test that an existing measure is returned unchanged."""
        assert build_measure(stable_one) is stable_one

    def test_name_includes_parameters(self):
        """Test that names identify the parameters."""
        assert HyperbolicMeasure(alpha=2.0).name == "hyperbolic(alpha=2)"
        assert ParetoMeasure(a=1.0, p=0.5).name == "pareto(a=1, p=0.5)"


class TestTail:
    """Test tails and their integrals on the built-in families."""

    def test_stable_tail(self, stable_one, stable_half):
        """Test M(x) = (1+beta)/(beta x)."""
        assert stable_one.tail(2.0) == pytest.approx(1.0)
        assert stable_half.tail(3.0) == pytest.approx(1.0)

    def test_pareto_tail(self, pareto):
        """Test M(1) = a for the Pareto family."""
        assert pareto.tail(1.0) == pytest.approx(1.0)

    def test_hyperbolic_continuity(self, hyperbolic_two):
        """Test that the hyperbolic tail is continuous at the join x = 1."""
        assert hyperbolic_two.tail(1.0) == pytest.approx(2.0)
        assert hyperbolic_two.tail(1.0 + 1e-12) == pytest.approx(2.0, rel=1e-9)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
    def test_tail_domain(self, stable_one, x):
        """Test that x <= 0 raises DomainError."""
        with pytest.raises(DomainError):
            stable_one.tail(x)

    def test_tail_between_stable(self, stable_one):
        """Test int_1^e 2/u du = 2."""
        assert stable_one.tail_between(1.0, math.e) == pytest.approx(2.0, rel=1e-12)

    def test_tail_between_empty(self, hyperbolic_two):
        """Test that an empty interval integrates to zero."""
        assert hyperbolic_two.tail_between(0.7, 0.7) == 0.0

    def test_tail_between_reversed(self, stable_one):
        """Test that y > x raises DomainError."""
        with pytest.raises(DomainError, match="y <= x"):
            stable_one.tail_between(2.0, 1.0)

    def test_integrated_tail(self, pareto, stable_one, hyperbolic_two):
        """Test I(x) for convergent and divergent families."""
        assert pareto.integrated_tail(2.0) == pytest.approx(0.5)
        assert stable_one.integrated_tail(1.0) == math.inf
        assert hyperbolic_two.integrated_tail(1.0) == pytest.approx(2.0)

    def test_integrated_tail_from_zero(self, pareto_light, pareto):
        """Test int_0^L M for p < 1 and its divergence for p > 1."""
        assert pareto_light.integrated_tail_from_zero(1.0) == pytest.approx(2.0)
        assert pareto.integrated_tail_from_zero(1.0) == math.inf
        assert pareto_light.zero_reachable()
        assert not pareto.zero_reachable()

    @pytest.mark.parametrize("meas", BUILTINS, ids=lambda m: m.name)
    def test_density_matches_tail(self, meas):
        """Test M(y) - M(x) = int_y^x m on a grid."""
        from mrca_dynamics.core.numerics import integrate

        for y, x in [(0.1, 0.5), (0.5, 2.0), (0.3, 4.0)]:
            direct = meas.tail(y) - meas.tail(x)
            quad = integrate(meas.density, y, x, points=meas.breakpoints).value
            assert quad == pytest.approx(direct, rel=1e-8)

    @pytest.mark.parametrize("meas", BUILTINS, ids=lambda m: m.name)
    def test_tail_between_matches_quadrature(self, meas):
        """Test that closed-form tail integrals agree with quadrature of M."""
        from mrca_dynamics.core.numerics import integrate

        for y, x in [(0.2, 0.9), (0.5, 3.0)]:
            quad = integrate(meas.tail, y, x, points=meas.breakpoints).value
            assert meas.tail_between(y, x) == pytest.approx(quad, rel=1e-9)

    def test_integrated_tail_difference(self, hyperbolic_two, logstable):
        """Test I(y) - I(x) = int_y^x M when I is finite."""
        for meas in (hyperbolic_two, logstable):
            gap = meas.integrated_tail(0.4) - meas.integrated_tail(2.5)
            assert gap == pytest.approx(meas.tail_between(0.4, 2.5), rel=1e-10)


class TestInverses:
    """Test the inverse functions used by the samplers."""

    def test_inverse_tail_stable(self, stable_one, stable_half):
        """Test M^-1 on the stable family."""
        assert stable_one.inverse_tail(2.0) == pytest.approx(1.0)
        assert stable_half.inverse_tail(3.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("meas", BUILTINS, ids=lambda m: m.name)
    def test_inverse_tail_roundtrip(self, meas):
        """Test inverse_tail(tail(x)) = x on a log-spaced grid."""
        for x in np.logspace(-2, 1, 7):
            assert meas.inverse_tail(meas.tail(x)) == pytest.approx(x, rel=1e-10)

    def test_inverse_tail_between_zero_cost(self, hyperbolic_two):
        """Test that c = 0 returns L."""
        assert hyperbolic_two.inverse_tail_between(0.8, 0.0) == 0.8

    def test_inverse_tail_between_stable(self, stable_one):
        """Test inverting 2 ln(L/y) = 2 ln 2 at L = 1."""
        assert stable_one.inverse_tail_between(1.0, 2.0 * math.log(2.0)) == pytest.approx(0.5)

    def test_inverse_tail_between_hyperbolic(self):
        """Test inverting ln(L/y) = ln 2 at L = 0.5 for alpha = 1."""
        meas = HyperbolicMeasure(alpha=1.0)
        assert meas.inverse_tail_between(0.5, math.log(2.0)) == pytest.approx(0.25)

    def test_inverse_tail_between_across_join(self, hyperbolic_two):
        """Test inversion when the solution lies on the other side of x = 1."""
        c = hyperbolic_two.tail_between(0.5, 3.0)
        assert hyperbolic_two.inverse_tail_between(3.0, c) == pytest.approx(0.5, rel=1e-10)

    def test_inverse_tail_between_no_solution(self, pareto_light):
        """Test that c beyond int_0^L M signals the jump-to-zero branch."""
        with pytest.raises(NoSolutionError):
            pareto_light.inverse_tail_between(1.0, 3.0)

    def test_inverse_integrated_tail(self, pareto):
        """Test I^-1 for the Pareto family, I(x) = 1/x."""
        assert pareto.inverse_integrated_tail(0.5) == pytest.approx(2.0)

    def test_inverse_integrated_tail_without_stationary_law(self, stable_one):
        """Test that I^-1 needs a finite integrated tail."""
        with pytest.raises(NoStationaryLawError):
            stable_one.inverse_integrated_tail(1.0)


class TestCustomMeasure:
    """Test user-supplied measures."""

    def test_callable_stable(self):
        """Test a callable wrapping the beta = 1 stable tail."""
        meas = CustomMeasure.from_callable(lambda x: 2.0 / x, name="stable_callable")
        assert meas.name == "stable_callable"
        assert meas.inverse_tail(0.5) == pytest.approx(4.0, rel=1e-10)
        assert meas.tail_between(1.0, 2.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-10)

    def test_finite_difference_density(self):
        """Test the finite-difference density of a tail-only measure."""
        meas = CustomMeasure.from_callable(lambda x: 2.0 / x)
        assert meas.density(0.5) == pytest.approx(8.0, rel=1e-6)
        assert meas.check_consistency(0.5, 2.0) < 1e-6

    def test_table_stable(self):
        """Test a tabulated beta = 1 stable tail against the closed form."""
        rows = [(x, 2.0 / x) for x in (0.01, 0.1, 1.0, 10.0, 100.0)]
        meas = CustomMeasure.from_table(rows)
        assert meas.tail_between(1.0, 2.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-10)
        assert meas.integrated_tail(1.0) == math.inf

    def test_table_extrapolation(self, table_rows):
        """Test power-law extrapolation beyond both ends of the table."""
        meas = CustomMeasure.from_table(table_rows)
        assert meas.tail(1e-3) == pytest.approx(1e6, rel=1e-9)
        assert meas.tail(1e3) == pytest.approx(1e-6, rel=1e-9)

    def test_table_integrated_tail(self, table_rows):
        """Test the exact extrapolated integrated tail of a tabulated 1/x^2."""
        meas = CustomMeasure.from_table(table_rows)
        assert meas.integrated_tail(1.0) == pytest.approx(1.0, rel=1e-9)
        assert meas.integrated_tail(2.0) == pytest.approx(0.5, rel=1e-9)
        assert meas.has_stationary_law()

    def test_table_classification_matches_pareto(self, table_rows):
        """Test that a tabulated 1/x^2 classifies like Pareto(1, 2)."""
        table = classify(CustomMeasure.from_table(table_rows))
        closed = classify(ParetoMeasure(a=1.0, p=2.0))
        assert table.has_stationary == closed.has_stationary == "yes"
        assert table.jump_chain == closed.jump_chain == "positive_recurrent"

    def test_callable_spec_not_serialized(self):
        """Test that callable measures report no JSON form."""
        report = classify(CustomMeasure.from_callable(lambda x: x**-2.0))
        assert report.measure is None


class TestClassification:
    """Test regime verdicts."""

    @pytest.mark.parametrize(
        "alpha, returns, chains",
        [
            (0.5, "yes", "transient"),
            (1.0, "no", "null_recurrent"),
            (2.0, "no", "positive_recurrent"),
        ],
    )
    def test_hyperbolic(self, alpha, returns, chains):
        """Test the three hyperbolic regimes."""
        report = classify(HyperbolicMeasure(alpha=alpha))
        assert report.returns_to_zero == returns
        assert report.jump_chain == chains
        assert report.point_recurrent == "yes"
        assert report.has_stationary == "yes"

    @pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
    def test_stable(self, beta):
        """Test that the stable genealogy never returns to zero and drifts away."""
        report = classify(StableMeasure(beta=beta))
        assert report.returns_to_zero == "no"
        assert report.point_recurrent == "no"
        assert report.has_stationary == "no"
        assert report.jump_chain == "transient"

    @pytest.mark.parametrize("p, stationary", [(0.5, "no"), (1.0, "no"), (2.0, "yes")])
    def test_pareto_stationarity(self, p, stationary):
        """Test has_stationary = yes iff p > 1."""
        assert classify(ParetoMeasure(a=1.0, p=p)).has_stationary == stationary

    def test_logstable(self, logstable):
        """Test the log-scale stable process is positive recurrent and stationary."""
        report = classify(logstable)
        assert report.has_stationary == "yes"
        assert report.jump_chain == "positive_recurrent"

    def test_criterion_values(self, hyperbolic_two):
        """Test that criterion values carry status and method."""
        criteria = classify(hyperbolic_two).criterion_values
        assert criteria["stationary"].value == pytest.approx(2.0)
        assert criteria["return_to_zero"].status == "divergent"
        assert criteria["positive_recurrence"].status == "finite"
        assert math.isfinite(criteria["positive_recurrence"].value)

    def test_report_serializes(self, hyperbolic_two):
        """Test that the report is JSON-serializable."""
        payload = classify(hyperbolic_two).to_dict()
        text = json.dumps(payload)
        assert payload["measure"] == {"type": "hyperbolic", "alpha": 2.0}
        assert '"inf"' in text

    def test_custom_heuristic(self):
        """Test the divergence heuristic on a callable hyperbolic measure."""
        meas = CustomMeasure.from_callable(
            lambda x: 2.0 / x if x <= 1.0 else 2.0 * math.exp(1.0 - x),
            density=lambda x: 2.0 / (x * x) if x <= 1.0 else 2.0 * math.exp(1.0 - x),
        )
        report = classify(meas)
        assert report.returns_to_zero == "no"
        assert report.has_stationary == "yes"
        assert report.jump_chain == "positive_recurrent"
        assert report.criterion_values["stationary"].method == "heuristic"
