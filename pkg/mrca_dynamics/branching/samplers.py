"""
Exact samplers for the delta-family started at zero.

Z_t from 0 is a beta-stable subordinator run to the gamma time t*G, so by stable
scaling Z_t = (t G)^(1/beta) S_1 with G ~ Gamma(delta, 1) and S_1 standard positive
stable, E exp(-theta S_1) = exp(-theta^beta). S_1 uses Kanter's representation.
For beta = 1 there is also the compound-Poisson form of the Feller diffusion.
"""

import math
from typing import Optional

import numpy as np

from mrca_dynamics.models.params import SubordinatorDraw
from mrca_dynamics.utils.exceptions import DomainError


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")


def sample_positive_stable(beta: float, rng: np.random.Generator, size: Optional[int] = None):
    """
    Standard positive beta-stable draws (Kanter).

    S = sin(beta U) / sin(U)^(1/beta) * (sin((1-beta) U) / W)^((1-beta)/beta),
    U ~ Uniform(0, pi), W ~ Exp(1). beta = 1 gives the constant 1.
    """
    _check_beta(beta)
    n = 1 if size is None else size
    if beta == 1.0:
        out = np.ones(n)
    else:
        u = rng.uniform(0.0, math.pi, n)
        while np.any(u == 0.0):
            zero = u == 0.0
            u[zero] = rng.uniform(0.0, math.pi, int(zero.sum()))
        w = rng.standard_exponential(n)
        out = (
            np.sin(beta * u)
            / np.sin(u) ** (1.0 / beta)
            * (np.sin((1.0 - beta) * u) / w) ** ((1.0 - beta) / beta)
        )
    return float(out[0]) if size is None else out


def sample_gamma(shape: float, rng: np.random.Generator, size: Optional[int] = None):
    """Gamma(shape, 1) draws by numpy's Marsaglia-Tsang squeeze; 0 at shape 0."""
    if shape < 0:
        raise DomainError(f"gamma shape must be non-negative, got {shape}")
    if shape == 0:
        return 0.0 if size is None else np.zeros(size)
    draws = rng.gamma(shape, 1.0, size)
    return float(draws) if size is None else draws


def sample_subordinator_draw(
    beta: float, delta: float, rng: np.random.Generator
) -> SubordinatorDraw:
    """One (S_1, G) pair."""
    return SubordinatorDraw(s1=sample_positive_stable(beta, rng), g=sample_gamma(delta, rng))


def sample_Z_from_zero(
    t: float, beta: float, delta: float, rng: np.random.Generator, size: Optional[int] = None
):
    """
    Exact draws of Z_t started at 0: (t G)^(1/beta) S_1.

    delta = 0 returns 0.
    """
    _check_beta(beta)
    if not (t >= 0 and delta >= 0):
        raise DomainError(f"need t >= 0 and delta >= 0, got t={t}, delta={delta}")
    if size is None:
        if delta == 0:
            return 0.0
        draw = sample_subordinator_draw(beta, delta, rng)
        return (t * draw.g) ** (1.0 / beta) * draw.s1
    if delta == 0:
        return np.zeros(size)
    g = sample_gamma(delta, rng, size)
    s1 = sample_positive_stable(beta, rng, size)
    return (t * g) ** (1.0 / beta) * s1


def sample_feller_X(x: float, t: float, rng: np.random.Generator, size: Optional[int] = None):
    """
    Feller diffusion (beta = 1) at time t from x: a Poisson(x/t) number of
    Exp(mean t) clusters.
    """
    if not (x >= 0 and t > 0):
        raise DomainError(f"need x >= 0 and t > 0, got x={x}, t={t}")
    n = 1 if size is None else size
    counts = rng.poisson(x / t, n)
    out = np.zeros(n)
    alive = counts > 0
    out[alive] = rng.gamma(counts[alive], t)
    return float(out[0]) if size is None else out


def sample_feller_Z(
    x: float, t: float, delta: float, rng: np.random.Generator, size: Optional[int] = None
):
    """beta = 1 delta-family from x: sample_feller_X plus t * Gamma(delta) immigration."""
    if delta < 0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    base = sample_feller_X(x, t, rng, size)
    immigration = sample_gamma(delta, rng, size)
    return base + t * immigration
