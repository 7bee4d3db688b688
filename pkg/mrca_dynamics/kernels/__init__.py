"""Closed-form laws of the MRCA-age process and its jump chains."""

from mrca_dynamics.kernels.chains import (
    Normalizer,
    detailed_balance_residual,
    invariant_cdf,
    invariant_normalizer,
    jump_intensity,
    peak_invariant_density,
    peak_kernel,
    trough_invariant_density,
    trough_kernel,
)
from mrca_dynamics.kernels.stable import (
    logscale_stationary_density,
    logscale_tail,
    stable_beta_limit_cdf,
    stable_beta_limit_density,
    stable_beta_limit_mean,
    stable_jump_rate,
    stable_jump_target_density,
    stable_transition_atom,
    stable_transition_density,
)
from mrca_dynamics.kernels.transition import (
    composed_transition_density,
    composed_zero_mass,
    coupling_time_sample,
    exact_tv,
    jump_rate,
    jump_target_cdf,
    jump_target_density,
    mass_balance_residual,
    prob_at_zero,
    require_stationary,
    sample_jump_target,
    sample_transition,
    stationary_cdf,
    stationary_density,
    stationary_pushforward_density,
    stationary_quantile,
    transition_atom,
    transition_density,
    tv_bound,
)

__all__ = [
    "transition_density",
    "transition_atom",
    "prob_at_zero",
    "mass_balance_residual",
    "jump_rate",
    "jump_target_density",
    "jump_target_cdf",
    "stationary_density",
    "stationary_cdf",
    "stationary_quantile",
    "tv_bound",
    "require_stationary",
    "sample_jump_target",
    "sample_transition",
    "composed_transition_density",
    "composed_zero_mass",
    "stationary_pushforward_density",
    "exact_tv",
    "coupling_time_sample",
    "peak_kernel",
    "trough_kernel",
    "peak_invariant_density",
    "trough_invariant_density",
    "invariant_normalizer",
    "invariant_cdf",
    "jump_intensity",
    "detailed_balance_residual",
    "Normalizer",
    "stable_transition_density",
    "stable_transition_atom",
    "stable_jump_rate",
    "stable_jump_target_density",
    "stable_beta_limit_density",
    "stable_beta_limit_cdf",
    "stable_beta_limit_mean",
    "logscale_tail",
    "logscale_stationary_density",
]
