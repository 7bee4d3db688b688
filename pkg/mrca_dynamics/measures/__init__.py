"""Lifetime measures and their regime classification."""

from pydantic import BaseModel

from mrca_dynamics.measures.base import LifetimeMeasure, RegimeFlags
from mrca_dynamics.measures.classification import classify, evaluate_criteria
from mrca_dynamics.measures.custom import CustomMeasure, PowerLawTable
from mrca_dynamics.measures.families import (
    HyperbolicMeasure,
    LogStableMeasure,
    ParetoMeasure,
    StableMeasure,
)
from mrca_dynamics.models.params import parse_measure_spec

# Measure registry mapping spec type tags to measure classes
MEASURE_REGISTRY = {
    "stable": StableMeasure,
    "hyperbolic": HyperbolicMeasure,
    "pareto": ParetoMeasure,
    "logstable": LogStableMeasure,
    "custom": CustomMeasure,
}


def build_measure(spec) -> LifetimeMeasure:
    """
    Build a lifetime measure from a spec model, a mapping or JSON text.

    Raises:
        ConfigurationError: If the measure description does not validate.
    """
    if isinstance(spec, LifetimeMeasure):
        return spec
    model: BaseModel = parse_measure_spec(spec)
    cls = MEASURE_REGISTRY[model.type]
    if cls is CustomMeasure:
        return CustomMeasure(model)
    return cls(**model.model_dump(exclude={"type"}))


__all__ = [
    "LifetimeMeasure",
    "RegimeFlags",
    "StableMeasure",
    "HyperbolicMeasure",
    "ParetoMeasure",
    "LogStableMeasure",
    "CustomMeasure",
    "PowerLawTable",
    "MEASURE_REGISTRY",
    "build_measure",
    "classify",
    "evaluate_criteria",
]
