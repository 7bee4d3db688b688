"""
Exact simulation of the MRCA-age process as a piecewise-deterministic Markov process.

Between jumps the age drifts up with slope 1. From state x the next jump happens
at the peak L with P(L > l) = M(l)/M(x) and lands at a trough R drawn from the
jump-target law. Near 0 (below the resolution t0) the path is advanced instead by
exact t0-step kernel draws; jumps recorded that way are flagged as coarse and the
stepped stretch is recorded as a zero interval.
"""

import math
from typing import Optional

import numpy as np

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.kernels.transition import (
    require_stationary,
    sample_jump_target,
    sample_transition,
    stationary_quantile,
)
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.models.results import PathSample
from mrca_dynamics.utils.exceptions import DomainError, IterationCapError

logger = get_logger(__name__)


def _open_uniform(rng: np.random.Generator) -> float:
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def next_peak(meas: LifetimeMeasure, x: float, rng: np.random.Generator) -> float:
    """Peak L > x of the first jump from x: L = M^{-1}(U M(x))."""
    if not x > 0:
        raise DomainError(f"next_peak needs x > 0, got {x}")
    u = 1.0 - rng.random()
    return max(x, meas.inverse_tail(u * meas.tail(x)))


def next_trough(meas: LifetimeMeasure, L: float, rng: np.random.Generator) -> float:
    """Post-jump state R in [0, L) from peak L."""
    if not L > 0:
        raise DomainError(f"next_trough needs L > 0, got {L}")
    R = sample_jump_target(meas, L, rng)
    return R if R < L else float(np.nextafter(L, 0.0))


def _append_zero_interval(intervals: list[tuple[float, float]], start: float, end: float) -> None:
    if intervals and intervals[-1][1] == start:
        intervals[-1] = (intervals[-1][0], end)
    else:
        intervals.append((start, end))


def simulate_path(
    meas: LifetimeMeasure,
    x0: float,
    horizon: float,
    rng: np.random.Generator,
    t0: Optional[float] = None,
    stream: Optional[int] = None,
) -> PathSample:
    """
    Simulate A on [0, horizon] from A_0 = x0.

    Args:
        meas: Lifetime measure.
        x0: Initial state, >= 0.
        horizon: Path length, > 0.
        rng: Random generator of this path's stream.
        t0: Zero resolution; defaults to zero_resolution_fraction * horizon.
        stream: Stream id recorded on the sample.

    Returns:
        PathSample with all jumps up to the horizon.

    Raises:
        IterationCapError: If more than window_jump_cap jumps are needed.
    """
    settings = get_settings()
    if not (x0 >= 0 and math.isfinite(x0)):
        raise DomainError(f"x0 must be finite and >= 0, got {x0}")
    if not (horizon > 0 and math.isfinite(horizon)):
        raise DomainError(f"horizon must be finite and > 0, got {horizon}")
    t0 = settings.zero_resolution_fraction * horizon if t0 is None else t0
    if not t0 > 0:
        raise DomainError(f"t0 must be positive, got {t0}")

    times: list[float] = []
    peaks: list[float] = []
    troughs: list[float] = []
    coarse: list[bool] = []
    zero_intervals: list[tuple[float, float]] = []

    now, x = 0.0, float(x0)
    while True:
        if len(times) >= settings.window_jump_cap:
            raise IterationCapError(f"path needed more than {settings.window_jump_cap} jumps")

        if x < t0:
            step = min(t0, horizon - now)
            if step <= 0.0:
                break
            y = sample_transition(meas, x, step, rng)
            _append_zero_interval(zero_intervals, now, now + step)
            now += step
            if y < x + step:
                times.append(now)
                peaks.append(x + step)
                troughs.append(y)
                coarse.append(True)
            x = y
            continue

        L = next_peak(meas, x, rng)
        T = now + (L - x)
        if T > horizon:
            break
        R = next_trough(meas, L, rng)
        times.append(T)
        peaks.append(L)
        troughs.append(R)
        coarse.append(False)
        now, x = T, R

    logger.debug(
        f"Simulated {meas.name} path: x0={x0}, horizon={horizon}, jumps={len(times)}, "
        f"coarse={sum(coarse)}"
    )
    return PathSample(
        x0=float(x0),
        horizon=float(horizon),
        jump_times=np.array(times),
        peaks=np.array(peaks),
        troughs=np.array(troughs),
        zero_intervals=zero_intervals,
        coarse=np.array(coarse, dtype=bool),
        stream=stream,
    )


def sample_stationary(meas: LifetimeMeasure, rng: np.random.Generator) -> float:
    """Draw from pi by solving I(x) = -log U."""
    require_stationary(meas)
    return stationary_quantile(meas, _open_uniform(rng))


def simulate_stationary(
    meas: LifetimeMeasure,
    horizon: float,
    rng: np.random.Generator,
    t0: Optional[float] = None,
    stream: Optional[int] = None,
) -> PathSample:
    """simulate_path started from a draw of the stationary law."""
    x0 = sample_stationary(meas, rng)
    return simulate_path(meas, x0, horizon, rng, t0=t0, stream=stream)


def marginal(path: PathSample, t):
    """A_t of a simulated path at a time or array of times."""
    return path.value_at(t)


def to_log_scale(path: PathSample, u_grid) -> np.ndarray:
    """
    Log time change B_u = -log(1 - exp(-u) A_{exp(u)}).

    For the stable genealogy started from 0, B is stationary with the log-scale
    stationary law.
    """
    u = np.asarray(u_grid, dtype=float)
    t = np.exp(u)
    if np.any(t > path.horizon):
        raise DomainError(f"exp(u) must not exceed the horizon {path.horizon}")
    ratio = np.asarray(path.value_at(t)) * np.exp(-u)
    with np.errstate(divide="ignore"):
        return -np.log1p(-ratio)
