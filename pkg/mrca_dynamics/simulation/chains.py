"""Peak/trough chain simulation and the invariant-law checks built on it."""

from typing import Literal, Optional

import numpy as np

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.core.numerics import solve_decreasing
from mrca_dynamics.kernels.chains import ChainKind, invariant_cdf, invariant_normalizer
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.models.results import ComparisonResult, JumpChainSample
from mrca_dynamics.simulation.paths import next_peak, next_trough, simulate_stationary
from mrca_dynamics.stats.goodness import chi_square_gof
from mrca_dynamics.utils.exceptions import DomainError, NoStationaryLawError

logger = get_logger(__name__)


def simulate_jump_chain(
    meas: LifetimeMeasure,
    start_kind: Literal["peak", "trough"],
    start: float,
    n: int,
    rng: np.random.Generator,
) -> JumpChainSample:
    """
    Run the alternating chain L_0, R_0, L_1, R_1, ... for n troughs.

    A peak start uses start as L_0; a trough start draws L_0 from it. The chain stops
    early when a trough lands on 0 (or underflows to it); that trough is not stored.
    """
    if start_kind not in ("peak", "trough"):
        raise DomainError(f"start_kind must be 'peak' or 'trough', got {start_kind!r}")
    if not start > 0:
        raise DomainError(f"chain start must be positive, got {start}")
    if n < 1:
        raise DomainError(f"chain length must be >= 1, got {n}")

    peaks = np.empty(n)
    troughs = np.empty(n)
    absorbed = False
    R = start
    count = 0
    for i in range(n):
        L = start if (i == 0 and start_kind == "peak") else next_peak(meas, R, rng)
        peaks[i] = L
        R = next_trough(meas, L, rng)
        if R == 0.0:
            absorbed = True
            break
        troughs[i] = R
        count += 1

    if absorbed:
        logger.debug(f"{meas.name} chain absorbed at zero after {count} troughs")
        return JumpChainSample(start_kind, start, peaks[: count + 1], troughs[:count], True)
    return JumpChainSample(start_kind, start, peaks, troughs, False)


def invariant_quantiles(
    meas: LifetimeMeasure, kind: ChainKind, bins: int, normalizer: Optional[float] = None
) -> list[float]:
    """Cut points splitting the normalized invariant law of a chain into equal-mass bins."""
    if normalizer is None:
        norm = invariant_normalizer(meas, kind)
        if not norm.finite:
            raise NoStationaryLawError(f"{meas.name}: {kind} invariant density is not normalizable")
        normalizer = norm.value
    edges = []
    value_rel_tol = get_settings().scaled_rel_tol
    for k in range(1, bins):
        target = 1.0 - k / bins
        edges.append(
            solve_decreasing(
                lambda x: 1.0 - invariant_cdf(meas, kind, x, normalizer),
                target,
                bracket_hint=1.0,
                value_rel_tol=value_rel_tol,
            )
        )
    return edges


def chain_invariant_check(
    meas: LifetimeMeasure,
    kind: ChainKind,
    values,
    bins: int = 20,
    name: Optional[str] = None,
) -> ComparisonResult:
    """Chi-square comparison of chain values with the normalized invariant law of that chain."""
    norm = invariant_normalizer(meas, kind)
    if not norm.finite:
        raise NoStationaryLawError(f"{meas.name}: {kind} invariant density is not normalizable")
    edges = invariant_quantiles(meas, kind, bins, norm.value)
    return chi_square_gof(
        values,
        lambda x: invariant_cdf(meas, kind, x, norm.value),
        edges,
        name=name or f"{kind}_invariant_law",
    )


def peak_stationary_sequence_check(
    meas: LifetimeMeasure,
    horizon: float,
    rng: np.random.Generator,
    burn_in: int = 1000,
    thin: int = 10,
    bins: int = 20,
) -> ComparisonResult:
    """
    Peaks collected along one long stationary path follow the normalized p.

    The first burn_in peaks are dropped and every thin-th peak is kept.
    """
    path = simulate_stationary(meas, horizon, rng)
    peaks = path.peaks[~path.coarse][burn_in::thin]
    logger.info(f"Peak sequence check on {peaks.size} of {path.n_jumps} peaks")
    return chain_invariant_check(meas, "peak", peaks, bins=bins, name="stationary_peak_sequence")
