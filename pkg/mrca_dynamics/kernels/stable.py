"""
Closed forms for the (1+beta)-stable genealogy, M(x) = (1+beta)/(beta x).

These are independent of the generic kernel code in transition.py; the two must
agree on every grid tested.
"""

import math

from mrca_dynamics.utils.exceptions import DomainError


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")


def stable_transition_density(beta: float, x: float, t: float, y: float) -> float:
    """(1+beta) t y^(1/beta) / (beta (x+t)^(2+1/beta)) on 0 < y < x + t."""
    _check_beta(beta)
    if not (x >= 0 and t > 0 and 0 < y < x + t):
        raise DomainError(f"need x >= 0, t > 0, 0 < y < x + t; got x={x}, t={t}, y={y}")
    return (1.0 + beta) * t * y ** (1.0 / beta) / (beta * (x + t) ** (2.0 + 1.0 / beta))


def stable_transition_atom(x: float, t: float) -> float:
    """x/(x+t)."""
    if not (x >= 0 and t > 0):
        raise DomainError(f"need x >= 0 and t > 0, got x={x}, t={t}")
    return x / (x + t)


def stable_jump_rate(x: float) -> float:
    """1/x."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return 1.0 / x


def stable_jump_target_density(beta: float, x: float, y: float) -> float:
    """(1 + 1/beta) y^(1/beta) / x^(1+1/beta) on 0 < y < x."""
    _check_beta(beta)
    if not 0 < y < x:
        raise DomainError(f"need 0 < y < x, got y={y}, x={x}")
    return (1.0 + 1.0 / beta) * y ** (1.0 / beta) / x ** (1.0 + 1.0 / beta)


def stable_beta_limit_density(beta: float, u: float) -> float:
    """Density of the Beta(1 + 1/beta, 1) law of A_t / t from 0."""
    _check_beta(beta)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u}")
    return (1.0 + 1.0 / beta) * u ** (1.0 / beta)


def stable_beta_limit_cdf(beta: float, u: float) -> float:
    """u^(1 + 1/beta)."""
    _check_beta(beta)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u}")
    return u ** (1.0 + 1.0 / beta)


def stable_beta_limit_mean(beta: float) -> float:
    """E[A_t / t] from 0: (1+beta)/(1+2 beta)."""
    _check_beta(beta)
    return (1.0 + beta) / (1.0 + 2.0 * beta)


def logscale_tail(beta: float, y: float) -> float:
    """Tail of the log-time-changed measure: (1+beta)/(beta (e^y - 1))."""
    _check_beta(beta)
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    return (1.0 + beta) / (beta * math.expm1(y))


def logscale_stationary_density(beta: float, x: float) -> float:
    """(1+beta)/beta e^(-x) (1 - e^(-x))^(1/beta), the stationary law of the log-scale process."""
    _check_beta(beta)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return (1.0 + beta) / beta * math.exp(-x) * (-math.expm1(-x)) ** (1.0 / beta)
