"""
Peak (L) and trough (R) chains of the jump mechanism.

In the stationary regime both chains are reversible: the L-chain with respect to
p(x) = m(x) exp(-I(x)) and the R-chain with respect to q(x) = M(x)^2 exp(-I(x)).
Either density is normalizable exactly when the chains are positive recurrent,
and the p-normalizer is the jump intensity of the stationary process.
"""

import math
from typing import Callable, Literal, NamedTuple

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.core.numerics import (
    detect_divergence,
    integrate,
    partial_integrals_near_zero,
    safe_exp,
)
from mrca_dynamics.kernels.transition import require_stationary
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.utils.exceptions import DomainError

logger = get_logger(__name__)

ChainKind = Literal["peak", "trough"]


class Normalizer(NamedTuple):
    """Total mass of an invariant density; value is math.inf when it diverges."""

    value: float
    finite: bool


def _check_pair(x: float, z: float) -> None:
    if not (x > 0 and z > 0):
        raise DomainError(f"chain kernels need x, z > 0, got x={x}, z={z}")


def peak_kernel(meas: LifetimeMeasure, x: float, z: float) -> float:
    """One-step density of L_{n+1} = z given L_n = x: m(z) int_0^{x^z} exp(-int_y^x M) dy."""
    require_stationary(meas)
    _check_pair(x, z)
    upper = min(x, z)
    inner = integrate(
        lambda y: safe_exp(-meas.tail_between(y, x)) if y > 0 else 0.0,
        0.0,
        upper,
        points=[b for b in meas.breakpoints if b < upper],
    ).value
    return meas.density(z) * inner


def trough_kernel(meas: LifetimeMeasure, x: float, z: float) -> float:
    """One-step density of R_{n+1} = z given R_n = x.

    M(z) * int_{max(x,z)}^inf m(y)/M(x) * exp(-int_z^y M) dy.
    """
    require_stationary(meas)
    _check_pair(x, z)
    lower = max(x, z)
    m_x = meas.tail(x)

    def integrand(y: float) -> float:
        weight = safe_exp(-meas.tail_between(z, y))
        return 0.0 if weight == 0.0 else meas.density(y) / m_x * weight

    mid = lower + 1.0
    inner = integrate(integrand, lower, mid, points=[b for b in meas.breakpoints if b > lower])
    tail = integrate(integrand, mid, math.inf)
    return meas.tail(z) * (inner.value + tail.value)


def peak_invariant_density(meas: LifetimeMeasure, x: float) -> float:
    """Unnormalized p(x) = m(x) exp(-I(x))."""
    require_stationary(meas)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    weight = safe_exp(-meas.integrated_tail(x))
    return 0.0 if weight == 0.0 else meas.density(x) * weight


def trough_invariant_density(meas: LifetimeMeasure, x: float) -> float:
    """Unnormalized q(x) = M(x)^2 exp(-I(x))."""
    require_stationary(meas)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    weight = safe_exp(-meas.integrated_tail(x))
    return 0.0 if weight == 0.0 else meas.tail(x) ** 2 * weight


def invariant_density(meas: LifetimeMeasure, kind: ChainKind) -> Callable[[float], float]:
    if kind == "peak":
        return lambda x: peak_invariant_density(meas, x)
    if kind == "trough":
        return lambda x: trough_invariant_density(meas, x)
    raise DomainError(f"chain kind must be 'peak' or 'trough', got {kind!r}")


def _normalizable(meas: LifetimeMeasure, density: Callable[[float], float]) -> bool:
    flags = meas.regime_flags()
    if flags is not None:
        return flags.positivity_integral_finite
    verdict = detect_divergence(partial_integrals_near_zero(density))
    if verdict.status == "inconclusive":
        logger.warning(f"{meas.name}: normalizability undecided, treating as divergent")
    return verdict.finite


def invariant_normalizer(meas: LifetimeMeasure, kind: ChainKind) -> Normalizer:
    """
    Total mass of p or q.

    Both are finite together (an integration by parts links them); the decision
    uses the closed-form regime when available and the endpoint heuristic otherwise.
    """
    require_stationary(meas)
    density = invariant_density(meas, kind)
    if not _normalizable(meas, density):
        return Normalizer(math.inf, False)
    points = [b for b in meas.breakpoints if b < 1.0]
    near = integrate(density, 0.0, 1.0, points=points).value
    far = integrate(density, 1.0, math.inf).value
    return Normalizer(near + far, True)


def invariant_cdf(meas: LifetimeMeasure, kind: ChainKind, x: float, normalizer: float) -> float:
    """Normalized invariant cdf of the chosen chain at x."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    density = invariant_density(meas, kind)
    points = [b for b in meas.breakpoints if b < x]
    return min(1.0, integrate(density, 0.0, x, points=points).value / normalizer)


def jump_intensity(meas: LifetimeMeasure) -> float:
    """
    Mean number of jumps per unit time of the stationary process.

    Returns:
        The p-normalizer, math.inf when the chains are not positive recurrent.

    Raises:
        NoStationaryLawError: Outside the stationary regime.
    """
    rho = invariant_normalizer(meas, "peak").value
    logger.debug(f"{meas.name}: jump intensity {rho}")
    return rho


def detailed_balance_residual(meas: LifetimeMeasure, kind: ChainKind, x: float, z: float) -> float:
    """|w(x) k(x, z) - w(z) k(z, x)| for the chain's kernel k and invariant density w."""
    kernel = peak_kernel if kind == "peak" else trough_kernel
    density = invariant_density(meas, kind)
    return abs(density(x) * kernel(meas, x, z) - density(z) * kernel(meas, z, x))
