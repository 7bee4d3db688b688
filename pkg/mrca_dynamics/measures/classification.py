"""
Regime classification of a lifetime measure.

Four integrals decide the behaviour of the MRCA-age process and its jump chains:

- return:     int_0^1 exp(int_x^1 M) dx        finite <=> the process hits zero
- escape:     int_1^inf exp(-int_1^x M) dx     finite <=> A_t -> inf (not point recurrent)
- stationary: I(1) = int_1^inf M               finite <=> a stationary law exists
- positivity: int_0^1 m(x) exp(-int_x^1 M) dx  finite <=> chains positive recurrent

Built-in families carry closed-form finiteness; their finite values are evaluated
by quadrature. Custom measures go through the endpoint-divergence heuristic.
"""

import math
from typing import Callable

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.core.numerics import (
    DivergenceVerdict,
    detect_divergence,
    integrate,
    partial_integrals_near_zero,
    partial_integrals_to_infinity,
    safe_exp,
)
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.models.params import dump_measure_spec
from mrca_dynamics.models.results import ChainVerdict, ClassificationReport, CriterionValue
from mrca_dynamics.utils.exceptions import InconclusiveDivergenceError, QuadratureError

logger = get_logger(__name__)

RETURN = "return_to_zero"
ESCAPE = "escape_to_infinity"
STATIONARY = "stationary"
POSITIVITY = "positive_recurrence"


def criterion_integrands(meas: LifetimeMeasure) -> dict[str, Callable[[float], float]]:
    """Integrands of the return, escape and positivity criteria."""

    def return_integrand(x: float) -> float:
        return safe_exp(meas.tail_between(x, 1.0))

    def escape_integrand(x: float) -> float:
        return safe_exp(-meas.tail_between(1.0, x))

    def positivity_integrand(x: float) -> float:
        weight = safe_exp(-meas.tail_between(x, 1.0))
        return 0.0 if weight == 0.0 else meas.density(x) * weight

    return {RETURN: return_integrand, ESCAPE: escape_integrand, POSITIVITY: positivity_integrand}


def _finite_value(name: str, f: Callable[[float], float], a: float, b: float) -> CriterionValue:
    try:
        value = integrate(f, a, b).value
    except QuadratureError as e:
        logger.warning(f"Criterion {name}: quadrature flagged, keeping partial value: {e}")
        value = e.partial_value
    return CriterionValue(name, value, "finite", "analytic")


def _from_verdict(name: str, verdict: DivergenceVerdict) -> CriterionValue:
    if verdict.status == "converges":
        return CriterionValue(name, verdict.value, "finite", "heuristic")
    if verdict.status == "diverges":
        return CriterionValue(name, math.inf, "divergent", "heuristic")
    return CriterionValue(name, math.nan, "inconclusive", "heuristic")


def evaluate_criteria(meas: LifetimeMeasure) -> dict[str, CriterionValue]:
    """Evaluate the four classification integrals with divergence flags."""
    integrands = criterion_integrands(meas)
    flags = meas.regime_flags()

    if flags is not None:
        values = {}
        spans = {RETURN: (0.0, 1.0), ESCAPE: (1.0, math.inf), POSITIVITY: (0.0, 1.0)}
        finite = {
            RETURN: flags.return_integral_finite,
            ESCAPE: flags.escape_integral_finite,
            POSITIVITY: flags.positivity_integral_finite,
        }
        for name, (a, b) in spans.items():
            if finite[name]:
                values[name] = _finite_value(name, integrands[name], a, b)
            else:
                values[name] = CriterionValue(name, math.inf, "divergent", "analytic")
        if flags.stationary_integral_finite:
            values[STATIONARY] = CriterionValue(
                STATIONARY, meas.integrated_tail(1.0), "finite", "analytic"
            )
        else:
            values[STATIONARY] = CriterionValue(STATIONARY, math.inf, "divergent", "analytic")
        return {k: values[k] for k in (RETURN, ESCAPE, STATIONARY, POSITIVITY)}

    values = {
        RETURN: _from_verdict(
            RETURN, detect_divergence(partial_integrals_near_zero(integrands[RETURN]))
        ),
        ESCAPE: _from_verdict(
            ESCAPE, detect_divergence(partial_integrals_to_infinity(integrands[ESCAPE]))
        ),
    }
    try:
        stationary = meas.integrated_tail(1.0)
        status = "finite" if math.isfinite(stationary) else "divergent"
        values[STATIONARY] = CriterionValue(STATIONARY, stationary, status, "heuristic")
    except InconclusiveDivergenceError:
        values[STATIONARY] = CriterionValue(STATIONARY, math.nan, "inconclusive", "heuristic")
    values[POSITIVITY] = _from_verdict(
        POSITIVITY, detect_divergence(partial_integrals_near_zero(integrands[POSITIVITY]))
    )
    return values


def _verdict(value: CriterionValue, finite_means: str, divergent_means: str) -> str:
    if value.status == "finite":
        return finite_means
    if value.status == "divergent":
        return divergent_means
    return "inconclusive"


def jump_chain_verdict(criteria: dict[str, CriterionValue]) -> ChainVerdict:
    """
    Recurrence class of the peak/trough chains.

    Inside the point-recurrent regime the near-zero criteria decide: transient when
    the return integral is finite, positive recurrent when the positivity integral
    is finite, null recurrent when both diverge. When A_t escapes to infinity the
    chains escape with it and are transient.
    """
    ret, esc, pos = criteria[RETURN], criteria[ESCAPE], criteria[POSITIVITY]
    if ret.status == "finite" or esc.status == "finite":
        return "transient"
    if "inconclusive" in (ret.status, esc.status, pos.status):
        return "inconclusive"
    if pos.status == "finite":
        return "positive_recurrent"
    return "null_recurrent"


def classify(meas: LifetimeMeasure) -> ClassificationReport:
    """
    Classify the regime of the MRCA-age process driven by a lifetime measure.

    Args:
        meas: Lifetime measure.

    Returns:
        ClassificationReport with verdicts and evaluated criterion integrals.
    """
    criteria = evaluate_criteria(meas)
    spec = meas.spec
    measure_json = dump_measure_spec(spec) if getattr(spec, "serializable", True) else None
    report = ClassificationReport(
        returns_to_zero=_verdict(criteria[RETURN], "yes", "no"),
        point_recurrent=_verdict(criteria[ESCAPE], "no", "yes"),
        has_stationary=_verdict(criteria[STATIONARY], "yes", "no"),
        jump_chain=jump_chain_verdict(criteria),
        criterion_values=criteria,
        measure=measure_json,
    )
    logger.debug(
        f"Classified {meas.name}: zero={report.returns_to_zero}, "
        f"point_recurrent={report.point_recurrent}, stationary={report.has_stationary}, "
        f"chains={report.jump_chain}"
    )
    return report
