"""
Record set and dual process of a stationary MRCA-age path.

A family is a record when it is at some moment the oldest one alive. Each jump
(T, L, R) of A ends the record (T - L, L) and starts the next one at T - R, so
record births and deaths are both increasing. The dual

    A^_t = max{s + y - t : (s, y) a family with s < t < s + y}  (0 if none)

is carried by the records alone and has the law of A reversed in time.
"""

import math
from typing import Callable, Optional

import numpy as np

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.kernels.transition import require_stationary, stationary_quantile
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.models.results import PathSample, RecordSet, TestReport
from mrca_dynamics.simulation.paths import sample_stationary, simulate_path
from mrca_dynamics.stats.goodness import ks_comparison
from mrca_dynamics.utils.exceptions import DomainError, IterationCapError, WindowNotClosedError

logger = get_logger(__name__)

BURN_IN_LEVEL = 0.999


def extract_records(
    path: PathSample, window: Optional[float] = None, closed: bool = True
) -> RecordSet:
    """Records ended by the jumps of a path: (T_n - L_n, L_n) for every jump."""
    births = path.jump_times - path.peaks
    return RecordSet(
        births=births,
        lifetimes=path.peaks.copy(),
        window=path.horizon if window is None else window,
        closed=closed,
    )


def _check_window(records: RecordSet, t: np.ndarray) -> None:
    if not records.closed:
        raise WindowNotClosedError("record set is not closed; run until the window closes")
    if np.any(t < 0) or np.any(t > records.window):
        raise WindowNotClosedError(f"t must lie in [0, {records.window}] for this record set")


def dual_path(records: RecordSet, t):
    """
    A^_t by binary search: the latest record born strictly before t carries the maximum.

    Raises:
        WindowNotClosedError: If t lies outside the closed window.
    """
    times = np.asarray(t, dtype=float)
    _check_window(records, times)
    k = np.searchsorted(records.births, times, side="left") - 1
    deaths = records.deaths
    residual = np.where(k >= 0, deaths[np.maximum(k, 0)] - times, 0.0)
    values = np.maximum(residual, 0.0)
    return float(values) if values.ndim == 0 else values


def dual_path_sweep(records: RecordSet, t: float) -> float:
    """A^_t from the wedge definition: scan every record (s, y) with s < t."""
    _check_window(records, np.asarray(t, dtype=float))
    best = 0.0
    for s, y in zip(records.births.tolist(), records.lifetimes.tolist()):
        if s < t:
            best = max(best, s + y - t)
    return best


def oldest_residual(records: RecordSet, t):
    """Remaining lifetime of the oldest family alive at t (the MRCA family of A)."""
    times = np.asarray(t, dtype=float)
    _check_window(records, times)
    deaths = records.deaths
    j = np.searchsorted(deaths, times, side="right")
    if np.any(j >= len(deaths)):
        raise WindowNotClosedError("no recorded family outlives t")
    values = deaths[j] - times
    return float(values) if values.ndim == 0 else values


def dual_jumps(records: RecordSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Upward jumps of the dual: times (record births), sizes and the gaps before them.

    The dual jumps at the birth s_{k+1} from d_k - s_{k+1} up to y_{k+1}.
    """
    births, deaths, lifetimes = records.births, records.deaths, records.lifetimes
    times = births[1:]
    sizes = lifetimes[1:] - np.maximum(deaths[:-1] - births[1:], 0.0)
    gaps = np.diff(births)
    return times, sizes, gaps


def run_until_window_closed(
    meas: LifetimeMeasure,
    T: float,
    rng: np.random.Generator,
    stream: Optional[int] = None,
) -> tuple[PathSample, RecordSet]:
    """
    Simulate a stationary path until every record relevant to [0, T] is known.

    The path is extended in chunks until a record is born after T; since u - A_u
    is nondecreasing no later jump can change A^ on [0, T].

    Raises:
        IterationCapError: If the window needs more than window_jump_cap jumps.
    """
    require_stationary(meas)
    if not T > 0:
        raise DomainError(f"window length must be positive, got {T}")
    settings = get_settings()
    chunk = 2.0 * T
    x0 = sample_stationary(meas, rng)
    t0 = settings.zero_resolution_fraction * T

    times, peaks, troughs, coarse = [], [], [], []
    zero_intervals: list[tuple[float, float]] = []
    offset, x = 0.0, x0
    while True:
        piece = simulate_path(meas, x, chunk, rng, t0=t0)
        times.append(piece.jump_times + offset)
        peaks.append(piece.peaks)
        troughs.append(piece.troughs)
        coarse.append(piece.coarse)
        zero_intervals.extend((a + offset, b + offset) for a, b in piece.zero_intervals)
        x = piece.value_at(chunk)
        offset += chunk

        n_jumps = sum(len(a) for a in times)
        if n_jumps > settings.window_jump_cap:
            raise IterationCapError(
                f"window {T} not closed within {settings.window_jump_cap} jumps"
            )
        # current record born at offset - x
        if offset - x > T:
            break

    path = PathSample(
        x0=x0,
        horizon=offset,
        jump_times=np.concatenate(times),
        peaks=np.concatenate(peaks),
        troughs=np.concatenate(troughs),
        zero_intervals=zero_intervals,
        coarse=np.concatenate(coarse),
        stream=stream,
    )
    records = extract_records(path, window=T, closed=True)
    logger.debug(f"Window {T} closed at {offset} after {path.n_jumps} jumps")
    return path, records


def burn_in(meas: LifetimeMeasure) -> float:
    """Boundary margin q: the 0.999 quantile of the stationary law."""
    return stationary_quantile(meas, BURN_IN_LEVEL)


def _phi(x: np.ndarray) -> np.ndarray:
    return x / (1.0 + x)


# Functionals f(x, y) whose means must agree under exchange of the pair
EXCHANGE_FUNCTIONALS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "xy": lambda x, y: x * y,
    "x2y": lambda x, y: x * x * y,
    "xy2": lambda x, y: x * y * y,
}


def reversal_test(
    meas: LifetimeMeasure,
    T: Optional[float],
    n_paths: int,
    rng: np.random.Generator,
    negative_control: bool = False,
    thin: int = 10,
    significance: Optional[float] = None,
    marks_per_burn_in: int = 4,
) -> TestReport:
    """
    Distributional checks that the dual is the time reversal of the stationary process.

    Comparisons (two-sample KS, dual quantities from odd paths against A quantities
    from even paths so the samples are independent):
      - marginal: A^ at fixed times against A at the same times;
      - gaps_vs_jumps: dual inter-jump gaps against A jump sizes;
      - jumps_vs_gaps: dual jump sizes against A inter-jump gaps.
    Moment checks: (jump D, following gap H) pairs of A are exchangeable, so
    E[f(x, y)] = E[f(y, x)] for x = phi(H), y = phi(D), phi(x) = x/(1+x) and f in
    {xy, x^2 y, x y^2}, with batch means over paths. phi keeps the functionals bounded
    for heavy-tailed lifetimes. f = xy is symmetric and holds identically; x y^2 is the
    mirror image of x^2 y.

    With negative_control=True the dual marginal is replaced by the remaining life of
    the oldest family, which must fail the marginal comparison.

    Only times, jumps and births inside [q, T - q] are used, q = burn_in(meas); marginal
    mark times are spaced q / marks_per_burn_in apart and T defaults to 4q.
    """
    require_stationary(meas)
    settings = get_settings()
    significance = settings.significance if significance is None else significance
    if n_paths < 2:
        raise DomainError(f"reversal_test needs at least 2 paths, got {n_paths}")
    q = burn_in(meas)
    T = 4.0 * q if T is None else T
    if T <= 2.0 * q:
        raise DomainError(f"window {T} must exceed twice the burn-in {q}")
    spacing = q / marks_per_burn_in
    mark_times = np.arange(q, T - q + 1e-12 * T, spacing)

    a_marg, d_marg = [], []
    a_gaps, d_gaps, a_jumps, d_jumps = [], [], [], []
    exchange_means = []
    total_jumps = 0

    for i in range(n_paths):
        path, records = run_until_window_closed(meas, T, rng, stream=i)
        total_jumps += path.n_jumps

        in_window = (path.jump_times >= q) & (path.jump_times <= T - q)
        gaps = path.gaps()
        sizes = path.jump_sizes()
        idx = np.flatnonzero(in_window)
        idx = idx[idx + 1 < path.n_jumps]
        H, D = _phi(gaps[idx + 1]), _phi(sizes[idx])
        if idx.size:
            exchange_means.append(
                [float(np.mean(f(H, D) - f(D, H))) for f in EXCHANGE_FUNCTIONALS.values()]
            )

        if i % 2 == 0:
            a_marg.append(path.value_at(mark_times))
            a_gaps.append(gaps[in_window][0::thin])
            a_jumps.append(sizes[in_window][thin // 2 :: thin])
        else:
            if negative_control:
                d_marg.append(oldest_residual(records, mark_times))
            else:
                d_marg.append(dual_path(records, mark_times))
            times, dsizes, dgaps = dual_jumps(records)
            born = (times >= q) & (times <= T - q)
            d_gaps.append(dgaps[born][0::thin])
            d_jumps.append(dsizes[born][thin // 2 :: thin])

    comparisons = [
        ks_comparison("marginal", np.concatenate(d_marg), np.concatenate(a_marg), significance),
        ks_comparison(
            "gaps_vs_jumps", np.concatenate(d_gaps), np.concatenate(a_jumps), significance
        ),
        ks_comparison(
            "jumps_vs_gaps", np.concatenate(d_jumps), np.concatenate(a_gaps), significance
        ),
    ]

    means = np.asarray(exchange_means, dtype=float).reshape(-1, len(EXCHANGE_FUNCTIONALS))
    n_batches = means.shape[0]
    moments = []
    for j, label in enumerate(EXCHANGE_FUNCTIONALS):
        column = means[:, j]
        mean = float(column.mean()) if n_batches else math.nan
        se = float(column.std(ddof=1) / math.sqrt(n_batches)) if n_batches > 1 else math.inf
        moments.append(
            {
                "name": f"exchange_{label}",
                "estimate": mean,
                "standard_error": se,
                "n_paths": n_batches,
                "passed": bool(abs(mean) <= 4.0 * se + 1e-12),
            }
        )
    report = TestReport(
        comparisons=comparisons,
        moments=moments,
        significance=significance,
        note=(
            f"{len(comparisons)} KS comparisons at {significance:g} each "
            f"(Bonferroni family level {len(comparisons) * significance:g}); "
            f"{total_jumps} jumps over {n_paths} paths"
            + ("; negative control" if negative_control else "")
        ),
    )
    logger.info(f"Reversal test on {meas.name}: passed={report.passed}, jumps={total_jumps}")
    return report
