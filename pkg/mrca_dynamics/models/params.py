import json
import logging
from dataclasses import dataclass
from typing import Annotated, Any, Callable, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from mrca_dynamics.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class StableSpec(BaseModel):
    """Stable lifetime measure, M(x) = (1+beta)/(beta*x)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["stable"] = "stable"
    beta: float = Field(gt=0.0, le=1.0)


class HyperbolicSpec(BaseModel):
    """Hyperbolic family m(x) = alpha/x^2 on (0,1], alpha*exp(1-x) beyond."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["hyperbolic"] = "hyperbolic"
    alpha: float = Field(gt=0.0)


class ParetoSpec(BaseModel):
    """Pure power tail M(x) = a*x^(-p)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["pareto"] = "pareto"
    a: float = Field(gt=0.0)
    p: float = Field(gt=0.0)


class LogStableSpec(BaseModel):
    """Log-time-changed stable measure, M(y) = (1+beta)/(beta*(exp(y)-1))."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["logstable"] = "logstable"
    beta: float = Field(gt=0.0, le=1.0)


class CustomSpec(BaseModel):
    """
    User-supplied measure, either as a tail table or as callables.

    Only the table serializes; callables are in-process only.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    type: Literal["custom"] = "custom"
    tail_table: Optional[list[tuple[float, float]]] = None
    tail: Optional[Callable[[float], float]] = Field(default=None, exclude=True)
    density: Optional[Callable[[float], float]] = Field(default=None, exclude=True)
    name: str = "custom"

    @model_validator(mode="after")
    def _check_source(self) -> "CustomSpec":
        if self.tail_table is None and self.tail is None:
            raise ValueError("custom measure needs a tail_table or a tail callable")
        if self.tail_table is not None:
            table = self.tail_table
            if len(table) < 4:
                raise ValueError("tail_table needs at least 4 rows")
            xs = [row[0] for row in table]
            ms = [row[1] for row in table]
            if any(x <= 0 for x in xs) or any(m <= 0 for m in ms):
                raise ValueError("tail_table entries must be strictly positive")
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("tail_table x values must be strictly increasing")
            if any(b >= a for a, b in zip(ms, ms[1:])):
                raise ValueError("tail_table M values must be strictly decreasing")
        return self

    @property
    def serializable(self) -> bool:
        return self.tail_table is not None and self.tail is None


MeasureSpec = Annotated[
    Union[StableSpec, HyperbolicSpec, ParetoSpec, LogStableSpec, CustomSpec],
    Field(discriminator="type"),
]

_measure_adapter: TypeAdapter = TypeAdapter(MeasureSpec)


def parse_measure_spec(payload: Union[str, dict[str, Any], BaseModel]) -> Any:
    """
    Parse a measure specification from JSON text or a mapping.

    Args:
        payload: JSON object text, a dict, or an already-built spec.

    Returns:
        One of the spec models.

    Raises:
        ConfigurationError: If the payload is not a valid measure specification.
    """
    if isinstance(payload, BaseModel):
        return payload
    try:
        if isinstance(payload, str):
            return _measure_adapter.validate_python(json.loads(payload))
        return _measure_adapter.validate_python(payload)
    except json.JSONDecodeError as e:
        logger.debug(f"Measure payload is not JSON: {payload!r}")
        raise ConfigurationError(f"Measure specification is not valid JSON: {e}") from e
    except ValidationError as e:
        logger.debug(f"Measure payload failed {e.error_count()} checks: {payload!r}")
        raise ConfigurationError(f"Invalid measure specification: {e}") from e


def dump_measure_spec(spec: BaseModel) -> dict[str, Any]:
    """Serialize a measure spec to its JSON object form."""
    return spec.model_dump(mode="json", exclude_none=True)


@dataclass(frozen=True)
class StableBranchingParams:
    """
    Parameters of the critical (1+beta)-stable branching family.

    Attributes:
        beta: Stability index in (0, 1]. beta = 1 is the Feller diffusion.
        delta: Family index, >= 0. delta = 0 is the unconditioned process,
            delta = (beta+1)/beta the process conditioned on non-extinction, and
            beta = 1, delta = 2 the four-dimensional squared-Bessel analogue.
        x0: Initial mass, >= 0.
    """

    beta: float
    delta: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        if self.x0 < 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")

    @property
    def conditioned_delta(self) -> float:
        """The delta that reproduces the process conditioned on non-extinction."""
        return (self.beta + 1.0) / self.beta

    @property
    def is_conditioned(self) -> bool:
        return abs(self.delta - self.conditioned_delta) < 1e-15

    @staticmethod
    def usage():
        """Prints detailed information about each parameter and its usage."""
        print(str(StableBranchingParams.__doc__))


@dataclass(frozen=True)
class SubordinatorDraw:
    """
    One draw of the subordinator pair used to sample the delta-family from zero.

    Attributes:
        s1: Standard positive beta-stable variate, E exp(-theta*S1) = exp(-theta^beta).
            Identically 1 when beta = 1.
        g: Gamma(delta, 1) variate (0 when delta = 0).
    """

    s1: float
    g: float

    def __post_init__(self):
        if not self.s1 > 0.0:
            raise ValueError(f"stable variate must be positive, got {self.s1}")
        if self.g < 0.0:
            raise ValueError(f"gamma variate must be non-negative, got {self.g}")
