import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from pydantic import BaseModel

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.core.numerics import (
    DivergenceVerdict,
    detect_divergence,
    integrate,
    partial_integrals_near_zero,
    partial_integrals_to_infinity,
    solve_decreasing,
)
from mrca_dynamics.utils.exceptions import (
    DomainError,
    InconclusiveDivergenceError,
    NoSolutionError,
    NoStationaryLawError,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class RegimeFlags:
    """
    Closed-form finiteness of the four classification integrals.

    Attributes:
        return_integral_finite: int_0^1 exp(int_x^1 M) dx < inf (the process hits zero).
        escape_integral_finite: int_1^inf exp(-int_1^x M) dx < inf (A_t -> inf).
        stationary_integral_finite: I(1) < inf (a stationary law exists).
        positivity_integral_finite: int_0^1 m(x) exp(-int_x^1 M) dx < inf.
    """

    return_integral_finite: bool
    escape_integral_finite: bool
    stationary_integral_finite: bool
    positivity_integral_finite: bool


def _require_positive(name: str, value: float) -> None:
    if not value > 0 or math.isnan(value):
        raise DomainError(f"{name} must be strictly positive, got {value}")


class LifetimeMeasure(ABC):
    """
    Base class for lifetime measures mu on (0, inf) with infinite mass near 0.

    A measure is described by its tail M(x) = mu((x, inf)); everything else
    (density, integrals between limits, integrated tail, inverses) has a numeric
    default here. Built-in families override the private hooks with closed forms.

    Public methods validate their arguments and raise DomainError outside the
    domain; the private hooks assume valid input.
    """

    # Interior kinks of M (table nodes, family joins) used as quadrature break points
    breakpoints: tuple[float, ...] = ()

    @property
    @abstractmethod
    def spec(self) -> BaseModel:
        """Measure specification this instance was built from."""
        raise NotImplementedError("spec property must be implemented by subclasses.")

    @property
    def name(self) -> str:
        params = self.spec.model_dump(exclude={"type"})
        args = ", ".join(f"{key}={value:g}" for key, value in params.items())
        return f"{self.spec.type}({args})"

    @abstractmethod
    def _tail(self, x: float) -> float:
        """M(x) for x > 0."""
        raise NotImplementedError

    def regime_flags(self) -> Optional[RegimeFlags]:
        """Closed-form regime, or None when only numerics can decide."""
        return None

    # Numeric defaults

    def _density(self, x: float) -> float:
        settings = get_settings()
        h = max(settings.density_step_rel * x, settings.density_step_min)
        if x - h <= 0:
            h = 0.5 * x
        return (self._tail(x - h) - self._tail(x + h)) / (2.0 * h)

    def _tail_between(self, y: float, x: float) -> float:
        if y == x:
            return 0.0
        # s = log u makes power-law tails nearly constant
        points = [math.log(b) for b in self.breakpoints if y < b < x]
        result = integrate(
            lambda s: self._tail(math.exp(s)) * math.exp(s),
            math.log(y),
            math.log(x),
            points=points,
        )
        return result.value

    def _decide_zero_integral(self) -> DivergenceVerdict:
        """Verdict on int_0^1 M, by the endpoint heuristic."""
        return detect_divergence(partial_integrals_near_zero(self._tail, 1.0))

    def _decide_infinity_integral(self) -> DivergenceVerdict:
        """Verdict on int_1^inf M, by the endpoint heuristic."""
        return detect_divergence(partial_integrals_to_infinity(self._tail, 1.0))

    @cached_property
    def _zero_verdict(self) -> DivergenceVerdict:
        verdict = self._decide_zero_integral()
        logger.debug(f"{self.name}: int_0^1 M verdict {verdict.status}")
        return verdict

    @cached_property
    def _infinity_verdict(self) -> DivergenceVerdict:
        verdict = self._decide_infinity_integral()
        logger.debug(f"{self.name}: int_1^inf M verdict {verdict.status}")
        return verdict

    def _integrated_tail(self, x: float) -> float:
        verdict = self._infinity_verdict
        if verdict.status == "diverges":
            return math.inf
        if verdict.status == "inconclusive":
            raise InconclusiveDivergenceError(
                f"Cannot decide whether int_x^inf M converges for {self.name}"
            )
        if x <= 1.0:
            return verdict.value + self._tail_between(x, 1.0)
        return verdict.value - self._tail_between(1.0, x)

    def _integrated_tail_from_zero(self, L: float) -> float:
        verdict = self._zero_verdict
        if verdict.status == "diverges":
            return math.inf
        if verdict.status == "inconclusive":
            raise InconclusiveDivergenceError(
                f"Cannot decide whether int_0 M converges for {self.name}"
            )
        if L <= 1.0:
            return verdict.value - self._tail_between(L, 1.0)
        return verdict.value + self._tail_between(1.0, L)

    def _inverse_tail(self, u: float) -> float:
        return solve_decreasing(self._tail, u, bracket_hint=1.0)

    def _inverse_integrated_tail(self, v: float) -> float:
        return solve_decreasing(
            self._integrated_tail,
            v,
            bracket_hint=1.0,
            value_rel_tol=get_settings().scaled_rel_tol,
        )

    def _inverse_tail_between(self, L: float, c: float) -> float:
        total = self._integrated_tail_from_zero(L)
        if c >= total:
            raise NoSolutionError(f"c={c} exceeds int_0^L M = {total} (L={L})")
        return solve_decreasing(
            lambda y: self._tail_between(y, L),
            c,
            bracket_hint=L,
            upper=L,
            value_rel_tol=get_settings().scaled_rel_tol,
        )

    # Public API

    def tail(self, x: float) -> float:
        """M(x) = mu((x, inf)), a rate per unit time."""
        _require_positive("x", x)
        return self._tail(x)

    def density(self, x: float) -> float:
        """Lifetime density m(x) = -M'(x)."""
        _require_positive("x", x)
        return self._density(x)

    def tail_between(self, y: float, x: float) -> float:
        """int_y^x M(u) du for 0 < y <= x."""
        _require_positive("y", y)
        if y > x:
            raise DomainError(f"tail_between needs y <= x, got y={y}, x={x}")
        return self._tail_between(y, x)

    def integrated_tail(self, x: float) -> float:
        """I(x) = int_x^inf M(u) du, math.inf when divergent."""
        _require_positive("x", x)
        return self._integrated_tail(x)

    def integrated_tail_from_zero(self, L: float) -> float:
        """int_0^L M(u) du, math.inf when divergent."""
        _require_positive("L", L)
        return self._integrated_tail_from_zero(L)

    def inverse_tail(self, u: float) -> float:
        """The unique x with M(x) = u."""
        _require_positive("u", u)
        return self._inverse_tail(u)

    def inverse_tail_between(self, L: float, c: float) -> float:
        """
        The unique y in (0, L] with int_y^L M = c.

        Raises:
            NoSolutionError: If c >= int_0^L M (the jump-to-zero branch).
        """
        _require_positive("L", L)
        if c < 0 or math.isnan(c):
            raise DomainError(f"c must be non-negative, got {c}")
        if c == 0:
            return L
        return self._inverse_tail_between(L, c)

    def inverse_integrated_tail(self, v: float) -> float:
        """
        The unique x with I(x) = v (stationary quantile at u = exp(-v)).

        Raises:
            NoStationaryLawError: If I diverges.
        """
        _require_positive("v", v)
        if not self.has_stationary_law():
            raise NoStationaryLawError(f"{self.name} has no stationary law; I(x) diverges")
        return self._inverse_integrated_tail(v)

    def has_stationary_law(self) -> bool:
        flags = self.regime_flags()
        if flags is not None:
            return flags.stationary_integral_finite
        return math.isfinite(self._integrated_tail(1.0))

    def zero_reachable(self) -> bool:
        """Whether int_0 M is finite, so jumps can land exactly on 0."""
        return math.isfinite(self._integrated_tail_from_zero(1.0))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec.model_dump(exclude_none=True)})"
