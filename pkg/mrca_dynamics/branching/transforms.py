"""
Laplace transforms of the critical (1+beta)-stable branching family.

All transforms are closed forms in theta^beta:

    P_t exp(-theta .)(x) = exp(-x theta (t theta^beta + 1)^(-1/beta)) (t theta^beta + 1)^(-delta)

delta = 0 is the unconditioned process X, delta = (beta+1)/beta the process Y
conditioned on non-extinction.
"""

import math

from scipy import special

from mrca_dynamics.core.numerics import integrate
from mrca_dynamics.utils.exceptions import DomainError


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")


def _check_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if not value >= 0:
            raise DomainError(f"{name} must be non-negative, got {value}")


def _growth(t: float, theta: float, beta: float) -> float:
    return 1.0 + t * theta**beta


def laplace_delta_family(x: float, t: float, theta: float, delta: float, beta: float) -> float:
    """E_x exp(-theta Z_t) for the delta-family."""
    _check_beta(beta)
    _check_nonnegative(x=x, t=t, theta=theta, delta=delta)
    g = _growth(t, theta, beta)
    return math.exp(-x * theta * g ** (-1.0 / beta) - delta * math.log(g))


def laplace_X(x: float, t: float, theta: float, beta: float) -> float:
    """E_x exp(-theta X_t) = exp(-theta x / (1 + theta^beta t)^(1/beta))."""
    return laplace_delta_family(x, t, theta, 0.0, beta)


def laplace_Y(y: float, t: float, theta: float, beta: float) -> float:
    """Transform of the process conditioned on non-extinction; y = 0 is allowed."""
    _check_beta(beta)
    _check_nonnegative(y=y, t=t, theta=theta)
    g = _growth(t, theta, beta)
    return math.exp(-y * theta * g ** (-1.0 / beta)) * g ** (-(beta + 1.0) / beta)


def extinction_prob(x: float, t: float, beta: float) -> float:
    """P{X_t = 0 | X_0 = x} = exp(-x / t^(1/beta))."""
    _check_beta(beta)
    _check_nonnegative(x=x)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return math.exp(-x / t ** (1.0 / beta))


def levy_density(beta: float, x: float) -> float:
    """(1+beta)/Gamma(1-beta) x^(-(1+beta)), the Levy density of the family sizes."""
    if not 0.0 < beta < 1.0:
        raise DomainError(f"levy_density needs beta in (0, 1), got {beta}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    log_const = math.log1p(beta) - special.gammaln(1.0 - beta)
    return math.exp(log_const - (1.0 + beta) * math.log(x))


def lemma51_check(beta: float, t: float) -> float:
    """
    Relative gap between the lifetime tail built from the Levy measure and (1+beta)/(beta t).

    int_0^inf P{X_t > 0 | X_0 = x} nu(dx), with survival 1 - exp(-x/t^(1/beta)),
    must equal the stable lifetime tail at t.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    s = t ** (1.0 / beta)

    def integrand(x: float) -> float:
        return -math.expm1(-x / s) * levy_density(beta, x)

    value = integrate(integrand, 0.0, s).value + integrate(integrand, s, math.inf).value
    target = (1.0 + beta) / (beta * t)
    return abs(value - target) / target


levy_lifetime_check = lemma51_check


def semigroup_residual(
    x: float, s: float, t: float, theta: float, delta: float, beta: float
) -> float:
    """|P_s P_t e_theta(x) - P_{s+t} e_theta(x)| via the composed-argument formula."""
    g = _growth(t, theta, beta)
    theta_t = theta * g ** (-1.0 / beta)
    composed = g ** (-delta) * laplace_delta_family(x, s, theta_t, delta, beta)
    return abs(composed - laplace_delta_family(x, s + t, theta, delta, beta))


def additivity_residual(
    x1: float, x2: float, delta1: float, delta2: float, t: float, theta: float, beta: float
) -> float:
    """Independent copies add: (x1, delta1) and (x2, delta2) give (x1 + x2, delta1 + delta2)."""
    product = laplace_delta_family(x1, t, theta, delta1, beta) * laplace_delta_family(
        x2, t, theta, delta2, beta
    )
    return abs(product - laplace_delta_family(x1 + x2, t, theta, delta1 + delta2, beta))


def scaling_residual(
    b: float, x: float, t: float, theta: float, delta: float, beta: float
) -> float:
    """b^(-1/beta) Z_{bt} from b^(1/beta) x has the transform of Z_t from x."""
    if not b > 0:
        raise DomainError(f"scale b must be positive, got {b}")
    c = b ** (1.0 / beta)
    scaled = laplace_delta_family(c * x, b * t, theta / c, delta, beta)
    return abs(scaled - laplace_delta_family(x, t, theta, delta, beta))


def size_biasing_residual(
    y: float, t: float, theta: float, beta: float, step: float = 1e-5
) -> float:
    """|laplace_Y + (1/y) d/dtheta laplace_X| with a central difference in theta."""
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    if not theta > step:
        raise DomainError(f"theta must exceed the difference step {step}, got {theta}")
    derivative = (laplace_X(y, t, theta + step, beta) - laplace_X(y, t, theta - step, beta)) / (
        2.0 * step
    )
    return abs(laplace_Y(y, t, theta, beta) + derivative / y)
