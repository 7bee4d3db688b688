"""
Transition law of the MRCA-age process.

From state x the process either drifts untouched to x + t (an atom), sits at 0
(possible only when int_0 M is finite) or has jumped and is spread over (0, x + t)
with density

    [M(x) - M(x+t)] / M(x) * exp(-int_y^{x+t} M) * M(y).

At x = 0 the prefactor is its limit 1. Exponents below the configured underflow
floor give exactly 0.
"""

import math

import numpy as np

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.core.numerics import integrate, safe_exp
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.utils.exceptions import DomainError, NoSolutionError, NoStationaryLawError

logger = get_logger(__name__)


def _check_state(x: float) -> None:
    if not (x >= 0 and math.isfinite(x)):
        raise DomainError(f"state x must be finite and >= 0, got {x}")


def _check_time(t: float) -> None:
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"time t must be finite and > 0, got {t}")


def require_stationary(meas: LifetimeMeasure) -> None:
    """Raise NoStationaryLawError unless the integrated tail is finite."""
    if not meas.has_stationary_law():
        raise NoStationaryLawError(f"{meas.name} has no stationary law: int_1^inf M diverges")


def _jumped_prefactor(meas: LifetimeMeasure, x: float, t: float) -> float:
    """[M(x) - M(x+t)] / M(x), probability of at least one jump on (0, t]."""
    if x == 0.0:
        return 1.0
    return 1.0 - meas.tail(x + t) / meas.tail(x)


def transition_atom(meas: LifetimeMeasure, x: float, t: float) -> float:
    """P^x{A_t = x + t} = M(x+t)/M(x), 0 from x = 0."""
    _check_state(x)
    _check_time(t)
    if x == 0.0:
        return 0.0
    return meas.tail(x + t) / meas.tail(x)


def transition_density(meas: LifetimeMeasure, x: float, t: float, y: float) -> float:
    """
    Density of A_t at y under P^x on the continuous part (0, x + t).

    Args:
        meas: Lifetime measure.
        x: Initial state, >= 0.
        t: Elapsed time, > 0.
        y: Target state with 0 < y < x + t.

    Returns:
        Density per unit state.

    Raises:
        DomainError: If y lies outside (0, x + t).
    """
    _check_state(x)
    _check_time(t)
    L = x + t
    if not 0.0 < y < L:
        raise DomainError(f"y must lie in (0, {L}), got {y}")
    weight = safe_exp(-meas.tail_between(y, L))
    if weight == 0.0:
        return 0.0
    return _jumped_prefactor(meas, x, t) * weight * meas.tail(y)


def prob_at_zero(meas: LifetimeMeasure, x: float, t: float) -> float:
    """
    P^x{A_t = 0} = [1 - M(x+t)/M(x)] * exp(-int_0^{x+t} M).

    Zero whenever int_0 M diverges.
    """
    _check_state(x)
    _check_time(t)
    total = meas.integrated_tail_from_zero(x + t)
    if math.isinf(total):
        return 0.0
    return _jumped_prefactor(meas, x, t) * safe_exp(-total)


def jump_rate(meas: LifetimeMeasure, x: float) -> float:
    """Total jump rate m(x)/M(x) in state x > 0."""
    if not x > 0:
        raise DomainError(f"jump rate needs x > 0, got {x}")
    return meas.density(x) / meas.tail(x)


def jump_target_density(meas: LifetimeMeasure, x: float, y: float) -> float:
    """Density exp(-int_y^x M) * M(y) of the post-jump state from peak x."""
    if not 0.0 < y < x:
        raise DomainError(f"jump target needs 0 < y < x, got y={y}, x={x}")
    weight = safe_exp(-meas.tail_between(y, x))
    return 0.0 if weight == 0.0 else weight * meas.tail(y)


def jump_target_cdf(meas: LifetimeMeasure, x: float, y: float) -> float:
    """
    P{R <= y | L = x} = exp(-int_y^x M) for 0 <= y <= x.

    At y = 0 this is the mass of a jump straight to 0.
    """
    if not (x > 0 and 0.0 <= y <= x):
        raise DomainError(f"jump target cdf needs 0 <= y <= x, x > 0, got y={y}, x={x}")
    if y == 0.0:
        total = meas.integrated_tail_from_zero(x)
        return 0.0 if math.isinf(total) else safe_exp(-total)
    return safe_exp(-meas.tail_between(y, x))


def stationary_density(meas: LifetimeMeasure, x: float) -> float:
    """pi(x) = M(x) * exp(-I(x))."""
    require_stationary(meas)
    if not x > 0:
        raise DomainError(f"stationary density needs x > 0, got {x}")
    weight = safe_exp(-meas.integrated_tail(x))
    return 0.0 if weight == 0.0 else meas.tail(x) * weight


def stationary_cdf(meas: LifetimeMeasure, x: float) -> float:
    """pi((0, x]) = exp(-I(x))."""
    require_stationary(meas)
    if not x > 0:
        raise DomainError(f"stationary cdf needs x > 0, got {x}")
    return safe_exp(-meas.integrated_tail(x))


def stationary_quantile(meas: LifetimeMeasure, u: float) -> float:
    """Inverse of stationary_cdf for u in (0, 1)."""
    require_stationary(meas)
    if not 0.0 < u < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {u}")
    return meas.inverse_integrated_tail(-math.log(u))


def tv_bound(meas: LifetimeMeasure, x: float, t: float) -> float:
    """
    Coupling bound on ||P^x{A_t in .} - pi||_TV.

    1 - exp(-I(x+t)) * [M(x) - M(x+t)]/M(x); nonincreasing in t with limit 0.
    """
    require_stationary(meas)
    _check_state(x)
    _check_time(t)
    survive = safe_exp(-meas.integrated_tail(x + t))
    return min(1.0, max(0.0, 1.0 - survive * _jumped_prefactor(meas, x, t)))


def sample_jump_target(meas: LifetimeMeasure, L: float, rng: np.random.Generator) -> float:
    """
    Draw the post-jump state from peak L: 0 with probability exp(-int_0^L M),
    otherwise the y solving int_y^L M = -log V.
    """
    v = 1.0 - rng.random()
    total = meas.integrated_tail_from_zero(L)
    if math.isfinite(total) and v <= safe_exp(-total):
        return 0.0
    c = -math.log(v)
    if c == 0.0:
        return L
    try:
        return meas.inverse_tail_between(L, c)
    except NoSolutionError:
        # c within rounding of int_0^L M
        return 0.0


def sample_transition(
    meas: LifetimeMeasure, x: float, t: float, rng: np.random.Generator
) -> float:
    """Exact draw of A_t under P^x."""
    _check_state(x)
    _check_time(t)
    L = x + t
    if x > 0.0 and rng.random() < meas.tail(L) / meas.tail(x):
        return L
    return sample_jump_target(meas, L, rng)


def composed_transition_density(
    meas: LifetimeMeasure, x: float, s: float, t: float, y: float
) -> float:
    """
    Density at y of the s-step kernel followed by the t-step kernel.

    Every route is composed: atom then density, density then density, density
    then atom, zero then density.
    """
    _check_time(s)
    L = x + s
    if not 0.0 < y < L + t:
        raise DomainError(f"y must lie in (0, {L + t}), got {y}")

    total = transition_atom(meas, x, s) * transition_density(meas, L, t, y)

    lo = max(0.0, y - t)
    if lo < L:
        points = [p for b in meas.breakpoints for p in (b, b - t) if lo < p < L]
        total += integrate(
            lambda z: transition_density(meas, x, s, z) * transition_density(meas, z, t, y),
            lo,
            L,
            points=points,
        ).value

    z = y - t
    if 0.0 < z < L:
        total += transition_density(meas, x, s, z) * transition_atom(meas, z, t)

    zero_s = prob_at_zero(meas, x, s)
    if zero_s > 0.0 and y < t:
        total += zero_s * transition_density(meas, 0.0, t, y)
    return total


def composed_zero_mass(meas: LifetimeMeasure, x: float, s: float, t: float) -> float:
    """Mass at 0 after an s-step then a t-step kernel."""
    L = x + s
    total = transition_atom(meas, x, s) * prob_at_zero(meas, L, t)
    total += integrate(
        lambda z: transition_density(meas, x, s, z) * prob_at_zero(meas, z, t),
        0.0,
        L,
        points=[p for b in meas.breakpoints for p in (b, b - t) if 0.0 < p < L],
    ).value
    zero_s = prob_at_zero(meas, x, s)
    if zero_s > 0.0:
        total += zero_s * prob_at_zero(meas, 0.0, t)
    return total


def stationary_pushforward_density(meas: LifetimeMeasure, t: float, y: float) -> float:
    """Density at y of pi pushed through the t-step kernel; equals pi(y) in stationarity."""
    require_stationary(meas)
    _check_time(t)
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")

    lo = max(0.0, y - t)
    mid = max(y, lo) + 1.0

    def integrand(x: float) -> float:
        pi_x = stationary_density(meas, x) if x > 0 else 0.0
        return 0.0 if pi_x == 0.0 else pi_x * transition_density(meas, x, t, y)

    points = [b for b in meas.breakpoints if lo < b < mid]
    total = integrate(integrand, lo, mid, points=points).value
    total += integrate(integrand, mid, math.inf).value
    if y > t:
        total += stationary_density(meas, y - t) * transition_atom(meas, y - t, t)
    return total


def exact_tv(meas: LifetimeMeasure, x: float, t: float) -> float:
    """Total variation distance between the t-step law from x and pi, by quadrature."""
    require_stationary(meas)
    L = x + t

    def gap(y: float) -> float:
        return abs(transition_density(meas, x, t, y) - stationary_density(meas, y))

    points = [b for b in meas.breakpoints if b < L]
    continuous = integrate(gap, 0.0, L, abs_tol=1e-9, rel_tol=1e-9, points=points).value
    beyond = 1.0 - stationary_cdf(meas, L)
    distance = 0.5 * (
        continuous + beyond + transition_atom(meas, x, t) + prob_at_zero(meas, x, t)
    )
    return min(1.0, distance)


def coupling_time_sample(meas: LifetimeMeasure, x: float, rng: np.random.Generator) -> float:
    """
    Draw T = max(Z, S) - x, Z the peak of the first jump from x and S ~ pi.

    After T the process from x and a stationary copy share their oldest family,
    so P(T > t) = tv_bound(meas, x, t).
    """
    require_stationary(meas)
    _check_state(x)
    if x == 0.0:
        z = 0.0
    else:
        z = meas.inverse_tail((1.0 - rng.random()) * meas.tail(x))
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    s = stationary_quantile(meas, u)
    return max(z, s, x) - x


def mass_balance_residual(meas: LifetimeMeasure, x: float, t: float) -> float:
    """|atom + int_0^{x+t} density + mass at 0 - 1| for the t-step kernel from x."""
    L = x + t
    continuous = integrate(
        lambda y: transition_density(meas, x, t, y),
        0.0,
        L,
        points=[b for b in meas.breakpoints if b < L],
    ).value
    return abs(transition_atom(meas, x, t) + continuous + prob_at_zero(meas, x, t) - 1.0)
