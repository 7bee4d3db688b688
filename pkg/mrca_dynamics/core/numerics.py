"""
Shared numerical kernel: adaptive quadrature, monotone root finding and the
endpoint-divergence heuristic used by the classification criteria.

Quadrature is QUADPACK (scipy.integrate.quad, Gauss-Kronrod 21-point rules with
adaptive bisection). Infinite upper limits are mapped onto a finite interval by
QUADPACK's reciprocal substitution.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, NamedTuple, Sequence

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.utils.exceptions import (
    BracketNotFoundError,
    DomainError,
    QuadratureError,
    RootResidualError,
)

logger = get_logger(__name__)


class QuadResult(NamedTuple):
    """Integral value with QUADPACK's absolute error estimate."""

    value: float
    error: float


@dataclass(frozen=True)
class DivergenceVerdict:
    """
    Outcome of the endpoint-divergence heuristic.

    Attributes:
        status: "converges", "diverges" or "inconclusive".
        value: Limit estimate when converging, math.inf when diverging, the last
            partial otherwise.
        partials: Number of partial integrals inspected.
    """

    status: Literal["converges", "diverges", "inconclusive"]
    value: float
    partials: int

    @property
    def finite(self) -> bool:
        return self.status == "converges"


def safe_exp(exponent: float) -> float:
    """exp() with a hard underflow guard: exponents below the configured floor give 0."""
    if exponent < get_settings().underflow_exponent:
        return 0.0
    if exponent > 709.0:
        return math.inf
    return math.exp(exponent)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float | None = None,
    rel_tol: float | None = None,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """
    Adaptive quadrature of f over (a, b).

    Args:
        f: Integrand, finite on the open interval.
        a: Lower limit.
        b: Upper limit, may be math.inf.
        abs_tol: Absolute tolerance. Defaults to the scaled configured tolerance.
        rel_tol: Relative tolerance. Defaults to the scaled configured tolerance.
        points: Interior break points (kinks, table nodes) for finite intervals.

    Returns:
        QuadResult with the value and QUADPACK's error estimate.

    Raises:
        DomainError: If a > b or a is not finite.
        QuadratureError: If QUADPACK flags non-convergence and its error estimate
            exceeds the requested tolerance. The partial value is attached.
    """
    settings = get_settings()
    abs_tol = settings.scaled_abs_tol if abs_tol is None else abs_tol
    rel_tol = settings.scaled_rel_tol if rel_tol is None else rel_tol

    if not math.isfinite(a):
        raise DomainError(f"Lower integration limit must be finite, got {a}")
    if a > b:
        raise DomainError(f"Integration limits reversed: a={a} > b={b}")
    if a == b:
        return QuadResult(0.0, 0.0)

    kwargs = {"epsabs": abs_tol, "epsrel": rel_tol, "limit": settings.quad_limit}
    if points and math.isfinite(b):
        interior = sorted(p for p in points if a < p < b)
        if interior:
            kwargs["points"] = interior
            kwargs["limit"] = max(settings.quad_limit, 2 * len(interior) + 50)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", sp_integrate.IntegrationWarning)
        value, error = sp_integrate.quad(f, a, b, **kwargs)

    if caught:
        tolerance = max(abs_tol, rel_tol * abs(value))
        message = str(caught[-1].message).strip().splitlines()[0]
        if not math.isfinite(value) or error > 100.0 * tolerance:
            raise QuadratureError(
                f"Quadrature over ({a}, {b}) did not converge: {message}",
                partial_value=value,
                error_estimate=error,
            )
        logger.debug(f"Quadrature over ({a}, {b}) accepted with warning: {message}")

    return QuadResult(float(value), float(error))


def solve_decreasing(
    g: Callable[[float], float],
    target: float,
    bracket_hint: float = 1.0,
    upper: float = math.inf,
    value_rel_tol: float = 0.0,
) -> float:
    """
    Solve g(x) = target for a continuous strictly decreasing g on (0, upper].

    The bracket is grown from the hint by powers of 2 (up or down), then refined
    with Brent's method.

    Args:
        g: Strictly decreasing function on (0, upper].
        target: Value to hit.
        bracket_hint: Positive starting point for bracket expansion.
        upper: Right end of the domain of g.
        value_rel_tol: Relative accuracy of g itself (quadrature-based g), added to the
            residual allowance.

    Returns:
        x with |g(x) - target| <= root_rel_tol * (1 + |target|) + value_rel_tol * |target|,
        plus the change of g over a few ulps of x.

    Raises:
        DomainError: If the hint is not positive.
        BracketNotFoundError: If no sign change is found within the configured doublings.
        RootResidualError: If the residual exceeds that allowance (g jumps across target).
    """
    settings = get_settings()
    if not bracket_hint > 0:
        raise DomainError(f"bracket_hint must be positive, got {bracket_hint}")

    def h(x: float) -> float:
        return g(x) - target

    x0 = min(bracket_hint, upper)
    h0 = h(x0)
    if h0 == 0.0:
        return x0

    if h0 > 0:
        lo, hi = x0, x0
        for _ in range(settings.max_bracket_doublings):
            lo, hi = hi, min(2.0 * hi, upper)
            h_hi = h(hi)
            if h_hi <= 0:
                break
            if hi == upper:
                raise BracketNotFoundError(
                    f"g stays above target {target} on (0, {upper}]; no root in domain"
                )
        else:
            raise BracketNotFoundError(
                f"No bracket above {x0} after {settings.max_bracket_doublings} doublings "
                f"(target={target})"
            )
    else:
        lo, hi = x0, x0
        for _ in range(settings.max_bracket_doublings):
            hi, lo = lo, 0.5 * lo
            h_lo = h(lo)
            if h_lo >= 0:
                break
        else:
            raise BracketNotFoundError(
                f"No bracket below {x0} after {settings.max_bracket_doublings} halvings "
                f"(target={target})"
            )

    if h(hi) == 0.0:
        return hi
    if h(lo) == 0.0:
        return lo

    root = float(optimize.brentq(h, lo, hi, xtol=1e-300, maxiter=500))
    residual = abs(h(root))
    tolerance = settings.scaled_root_tol * (1.0 + abs(target)) + value_rel_tol * abs(target)
    if residual > tolerance:
        # change of g over a few ulps of root, from a secant over a 1e-8 relative step
        left, right = root * (1.0 - 1e-8), min(root * (1.0 + 1e-8), upper)
        slope = abs(h(left) - h(right)) / (right - left)
        resolution = 4.0 * np.finfo(float).eps * root * slope
        if residual > tolerance + resolution:
            raise RootResidualError(
                f"Root {root} leaves residual {residual:.3e} > {tolerance + resolution:.3e} "
                f"(target={target}); g is not continuous there",
                root,
                residual,
            )
        logger.debug(f"Root at {root} has residual {residual:.3e} at float resolution")
    return root


def detect_divergence(partial_sums: Iterable[float]) -> DivergenceVerdict:
    """
    Classify a sequence of partial integrals on refined endpoint grids.

    Divergence is declared once the configured number of successive partials each
    grow by at least the growth factor (or a partial is infinite). Convergence is
    declared when an increment falls below the relative tolerance of the running
    total. Anything else is inconclusive.

    Args:
        partial_sums: Partial integrals, ordered by refinement.

    Returns:
        DivergenceVerdict.
    """
    settings = get_settings()
    factor = settings.divergence_growth_factor
    run_needed = settings.divergence_growth_run
    tol = settings.scaled_convergence_tol

    previous: float | None = None
    run = 0
    count = 0
    for partial in partial_sums:
        count += 1
        if math.isnan(partial):
            return DivergenceVerdict("inconclusive", partial, count)
        if math.isinf(partial):
            return DivergenceVerdict("diverges", math.inf, count)
        if previous is not None:
            if previous > 0 and partial >= factor * previous:
                run += 1
                if run >= run_needed:
                    return DivergenceVerdict("diverges", math.inf, count)
            else:
                run = 0
            if abs(partial - previous) <= tol * abs(partial):
                return DivergenceVerdict("converges", partial, count)
        previous = partial

    last = previous if previous is not None else math.nan
    return DivergenceVerdict("inconclusive", last, count)


def _log_scale_increment(f: Callable[[float], float], s0: float, s1: float, sign: float) -> float:
    """Integral of f over the x-range with x = exp(sign * s), s in [s0, s1]."""

    def integrand(s: float) -> float:
        x = math.exp(sign * s)
        with np.errstate(over="ignore", under="ignore"):
            value = f(x) * x
        return value if math.isfinite(value) else math.inf

    try:
        value = integrate(integrand, s0, s1).value
    except OverflowError:
        return math.inf
    except QuadratureError as e:
        if not math.isfinite(e.partial_value):
            return math.inf
        return e.partial_value
    return math.inf if math.isnan(value) else value


def partial_integrals_near_zero(f: Callable[[float], float], upper: float = 1.0) -> list[float]:
    """
    Partial integrals of f over [exp(-2^k) * upper, upper] for k = 0..refinements.

    Each increment is integrated in the log variable so that doubly-exponential
    grids stay well conditioned.
    """
    settings = get_settings()
    partials = []
    total = integrate(f, math.exp(-1.0) * upper, upper).value
    partials.append(total)
    for k in range(1, settings.divergence_refinements + 1):
        s0, s1 = 2.0 ** (k - 1), 2.0**k
        # x = upper * exp(-s), dx = -x ds
        increment = _log_scale_increment(lambda x: f(x * upper), s0, s1, -1.0) * upper
        total += increment
        partials.append(total)
        if math.isinf(total):
            break
    return partials


def partial_integrals_to_infinity(f: Callable[[float], float], lower: float = 1.0) -> list[float]:
    """Partial integrals of f over [lower, lower * exp(2^k)] for k = 0..refinements."""
    settings = get_settings()
    partials = []
    total = integrate(f, lower, lower * math.e).value
    partials.append(total)
    for k in range(1, settings.divergence_refinements + 1):
        s0, s1 = 2.0 ** (k - 1), 2.0**k
        increment = _log_scale_increment(lambda x: f(x * lower), s0, s1, 1.0) * lower
        total += increment
        partials.append(total)
        if math.isinf(total):
            break
    return partials
