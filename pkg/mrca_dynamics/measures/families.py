"""
Built-in lifetime measure families with closed-form tails, integrals and inverses.
"""

import math
from dataclasses import dataclass
from typing import ClassVar

from mrca_dynamics.core.numerics import safe_exp
from mrca_dynamics.measures.base import LifetimeMeasure, RegimeFlags
from mrca_dynamics.models.params import HyperbolicSpec, LogStableSpec, ParetoSpec, StableSpec
from mrca_dynamics.utils.exceptions import DomainError, NoSolutionError


def _power(x: float, exponent: float) -> float:
    """x**exponent for x > 0 that saturates to inf / 0 instead of raising."""
    return safe_exp(exponent * math.log(x))


@dataclass(frozen=True)
class StableMeasure(LifetimeMeasure):
    """
    Lifetime measure of the (1+beta)-stable genealogy: M(x) = c/x with c = (1+beta)/beta.

    Never returns to zero, drifts to infinity, no stationary law.
    """

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must lie in (0, 1], got {self.beta}")

    @property
    def spec(self) -> StableSpec:
        return StableSpec(beta=self.beta)

    @property
    def c(self) -> float:
        return (1.0 + self.beta) / self.beta

    def _tail(self, x: float) -> float:
        return self.c / x

    def _density(self, x: float) -> float:
        return self.c / (x * x)

    def _tail_between(self, y: float, x: float) -> float:
        return self.c * math.log(x / y)

    def _integrated_tail(self, x: float) -> float:
        return math.inf

    def _integrated_tail_from_zero(self, L: float) -> float:
        return math.inf

    def _inverse_tail(self, u: float) -> float:
        return self.c / u

    def _inverse_tail_between(self, L: float, c: float) -> float:
        return L * math.exp(-c / self.c)

    def regime_flags(self) -> RegimeFlags:
        return RegimeFlags(
            return_integral_finite=False,
            escape_integral_finite=True,
            stationary_integral_finite=False,
            positivity_integral_finite=True,
        )


@dataclass(frozen=True)
class HyperbolicMeasure(LifetimeMeasure):
    """
    m(x) = alpha/x^2 on (0, 1] continued by alpha*exp(1-x) for x > 1.

    M is continuous with M(1) = alpha and I(1) = alpha. The regime is decided by
    alpha near zero: transient below 1, null recurrent at 1, positive recurrent above.
    """

    alpha: float
    breakpoints: ClassVar[tuple[float, ...]] = (1.0,)

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def spec(self) -> HyperbolicSpec:
        return HyperbolicSpec(alpha=self.alpha)

    def _tail(self, x: float) -> float:
        if x <= 1.0:
            return self.alpha / x
        return self.alpha * math.exp(1.0 - x)

    def _density(self, x: float) -> float:
        if x <= 1.0:
            return self.alpha / (x * x)
        return self.alpha * math.exp(1.0 - x)

    def _integrated_tail(self, x: float) -> float:
        if x > 1.0:
            return self.alpha * math.exp(1.0 - x)
        return self.alpha * (1.0 - math.log(x))

    def _tail_between(self, y: float, x: float) -> float:
        a = self.alpha
        if x <= 1.0:
            return a * math.log(x / y)
        if y >= 1.0:
            return -a * math.exp(1.0 - y) * math.expm1(y - x)
        return -a * math.log(y) - a * math.expm1(1.0 - x)

    def _integrated_tail_from_zero(self, L: float) -> float:
        return math.inf

    def _inverse_tail(self, u: float) -> float:
        if u >= self.alpha:
            return self.alpha / u
        return 1.0 + math.log(self.alpha / u)

    def _inverse_integrated_tail(self, v: float) -> float:
        if v >= self.alpha:
            return math.exp(1.0 - v / self.alpha)
        return 1.0 - math.log(v / self.alpha)

    def _inverse_tail_between(self, L: float, c: float) -> float:
        a = self.alpha
        if L <= 1.0:
            return L * math.exp(-c / a)
        above_one = -a * math.expm1(1.0 - L)  # int_1^L M
        if c <= above_one:
            return 1.0 - math.log(math.exp(1.0 - L) + c / a)
        return math.exp(-(c - above_one) / a)

    def regime_flags(self) -> RegimeFlags:
        return RegimeFlags(
            return_integral_finite=self.alpha < 1.0,
            escape_integral_finite=False,
            stationary_integral_finite=True,
            positivity_integral_finite=self.alpha > 1.0,
        )


@dataclass(frozen=True)
class ParetoMeasure(LifetimeMeasure):
    """
    Pure power tail M(x) = a*x^(-p).

    Stationary iff p > 1. Reaches zero iff p < 1 (int_0 M finite) or p = 1 with a < 1.
    """

    a: float
    p: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.p > 0.0):
            raise DomainError(f"a and p must be positive, got a={self.a}, p={self.p}")

    @property
    def spec(self) -> ParetoSpec:
        return ParetoSpec(a=self.a, p=self.p)

    def _tail(self, x: float) -> float:
        return self.a * _power(x, -self.p)

    def _density(self, x: float) -> float:
        return self.p * self.a * _power(x, -self.p - 1.0)

    def _tail_between(self, y: float, x: float) -> float:
        if self.p == 1.0:
            return self.a * math.log(x / y)
        q = 1.0 - self.p
        return self.a * (_power(x, q) - _power(y, q)) / q

    def _integrated_tail(self, x: float) -> float:
        if self.p <= 1.0:
            return math.inf
        return self.a * _power(x, 1.0 - self.p) / (self.p - 1.0)

    def _integrated_tail_from_zero(self, L: float) -> float:
        if self.p >= 1.0:
            return math.inf
        return self.a * _power(L, 1.0 - self.p) / (1.0 - self.p)

    def _inverse_tail(self, u: float) -> float:
        return _power(self.a / u, 1.0 / self.p)

    def _inverse_integrated_tail(self, v: float) -> float:
        q = 1.0 - self.p
        return _power(v * (self.p - 1.0) / self.a, 1.0 / q)

    def _inverse_tail_between(self, L: float, c: float) -> float:
        if self.p == 1.0:
            return L * math.exp(-c / self.a)
        q = 1.0 - self.p
        w = _power(L, q) - c * q / self.a
        if w <= 0.0:
            raise NoSolutionError(f"c={c} exceeds int_0^L M for L={L}")
        return _power(w, 1.0 / q)

    def regime_flags(self) -> RegimeFlags:
        p, a = self.p, self.a
        return RegimeFlags(
            return_integral_finite=p < 1.0 or (p == 1.0 and a < 1.0),
            escape_integral_finite=p < 1.0 or (p == 1.0 and a > 1.0),
            stationary_integral_finite=p > 1.0,
            positivity_integral_finite=p > 1.0 or (p == 1.0 and a > 1.0),
        )


@dataclass(frozen=True)
class LogStableMeasure(LifetimeMeasure):
    """
    The stable measure seen on the logarithmic time scale: M(y) = c/(exp(y) - 1).

    I(y) = -c*log(1 - exp(-y)), so the stationary cdf is (1 - exp(-y))^c.
    """

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must lie in (0, 1], got {self.beta}")

    @property
    def spec(self) -> LogStableSpec:
        return LogStableSpec(beta=self.beta)

    @property
    def c(self) -> float:
        return (1.0 + self.beta) / self.beta

    def _tail(self, x: float) -> float:
        return self.c / math.expm1(x)

    def _density(self, x: float) -> float:
        e = math.exp(-x)
        return self.c * e / (math.expm1(-x) ** 2)

    def _integrated_tail(self, x: float) -> float:
        return -self.c * math.log(-math.expm1(-x))

    def _tail_between(self, y: float, x: float) -> float:
        return self.c * (math.log(-math.expm1(-x)) - math.log(-math.expm1(-y)))

    def _integrated_tail_from_zero(self, L: float) -> float:
        return math.inf

    def _inverse_tail(self, u: float) -> float:
        return math.log1p(self.c / u)

    def _inverse_integrated_tail(self, v: float) -> float:
        return -math.log(-math.expm1(-v / self.c))

    def _inverse_tail_between(self, L: float, c: float) -> float:
        survivor = -math.expm1(-L) * math.exp(-c / self.c)
        return -math.log1p(-survivor)

    def regime_flags(self) -> RegimeFlags:
        return RegimeFlags(
            return_integral_finite=False,
            escape_integral_finite=False,
            stationary_integral_finite=True,
            positivity_integral_finite=True,
        )
