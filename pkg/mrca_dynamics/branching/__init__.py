"""Transforms and samplers of the critical stable branching family."""

from mrca_dynamics.branching.samplers import (
    sample_feller_X,
    sample_feller_Z,
    sample_gamma,
    sample_positive_stable,
    sample_subordinator_draw,
    sample_Z_from_zero,
)
from mrca_dynamics.branching.transforms import (
    additivity_residual,
    extinction_prob,
    laplace_delta_family,
    laplace_X,
    laplace_Y,
    lemma51_check,
    levy_density,
    levy_lifetime_check,
    scaling_residual,
    semigroup_residual,
    size_biasing_residual,
)

__all__ = [
    "laplace_X",
    "laplace_Y",
    "laplace_delta_family",
    "extinction_prob",
    "levy_density",
    "lemma51_check",
    "levy_lifetime_check",
    "semigroup_residual",
    "additivity_residual",
    "scaling_residual",
    "size_biasing_residual",
    "sample_positive_stable",
    "sample_gamma",
    "sample_subordinator_draw",
    "sample_Z_from_zero",
    "sample_feller_X",
    "sample_feller_Z",
]
