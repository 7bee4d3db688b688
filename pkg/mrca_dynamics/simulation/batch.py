"""
Batch path simulation fanned out over worker processes.

Each path runs on its own RngStream (seed, stream id), so results do not depend on
the number of workers or on scheduling; output is ordered by stream id.
"""

import multiprocessing as mp
from functools import partial
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import MrcaSettings, get_settings
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.measures.custom import CustomMeasure
from mrca_dynamics.simulation.paths import simulate_path, simulate_stationary
from mrca_dynamics.simulation.rng import RngStream

logger = get_logger(__name__)


def simulate_single_path(
    stream: int,
    meas: LifetimeMeasure,
    x0: Optional[float],
    horizon: float,
    seed: int,
    t0: Optional[float] = None,
    settings: Optional[MrcaSettings] = None,
    verbose: bool = False,
) -> Dict[str, Any]:
    """
    Simulate one path on stream `stream`.

    Args:
        stream: Stream id, also the path identifier.
        meas: Lifetime measure.
        x0: Initial state; None starts from the stationary law.
        horizon: Path length.
        seed: Master seed.
        t0: Zero resolution.
        settings: Settings of the parent process, re-applied in the worker.
        verbose: Enable verbose logging for this process.

    Returns:
        Dictionary with the stream id, status, error message and the PathSample.
    """
    try:
        # Import inside function for multiprocessing compatibility
        from mrca_dynamics.config.logging import configure_logging
        from mrca_dynamics.config.settings import configure_settings

        if settings is not None:
            configure_settings(**settings.model_dump())
        if not verbose:
            configure_logging(verbose=False)

        rng = RngStream(seed, stream).generator()
        if x0 is None:
            path = simulate_stationary(meas, horizon, rng, t0=t0, stream=stream)
        else:
            path = simulate_path(meas, x0, horizon, rng, t0=t0, stream=stream)
        return {"stream": stream, "status": "success", "error": None, "path": path}

    except Exception as e:
        logger.error(f"Error simulating stream {stream}: {e}", exc_info=verbose)
        return {"stream": stream, "status": "error", "error": str(e), "path": None}


def simulate_batch(
    meas: LifetimeMeasure,
    x0: Optional[float],
    horizon: float,
    n_paths: int,
    seed: int,
    t0: Optional[float] = None,
    n_workers: Optional[int] = 1,
    verbose: bool = False,
) -> List[Dict[str, Any]]:
    """
    Simulate n_paths independent paths on streams 0..n_paths-1.

    Args:
        meas: Lifetime measure.
        x0: Initial state; None starts every path from the stationary law.
        horizon: Path length.
        n_paths: Number of paths.
        seed: Master seed.
        t0: Zero resolution.
        n_workers: Worker processes (None uses cpu_count - 1, min 1).
        verbose: Enable verbose logging and the progress bar.

    Returns:
        One result dictionary per stream, ordered by stream id.
    """
    if n_paths <= 0:
        logger.warning("No paths to simulate")
        return []

    if n_workers is None:
        n_workers = max(1, mp.cpu_count() - 1)
    if isinstance(meas, CustomMeasure) and meas.table is None and n_workers > 1:
        # user callables do not pickle
        logger.info("Custom callable measure: simulating in-process")
        n_workers = 1

    logger.info(f"Simulating {n_paths} paths of {meas.name} with {n_workers} workers")

    simulate_func = partial(
        simulate_single_path,
        meas=meas,
        x0=x0,
        horizon=horizon,
        seed=seed,
        t0=t0,
        settings=get_settings(),
        verbose=verbose,
    )
    streams = list(range(n_paths))

    if n_workers == 1:
        results = [simulate_func(s) for s in tqdm(streams, desc="Simulating", disable=not verbose)]
    else:
        with mp.Pool(processes=n_workers) as pool:
            results = list(
                tqdm(
                    pool.imap(simulate_func, streams),
                    total=n_paths,
                    desc="Simulating paths",
                    unit="path",
                    disable=not verbose,
                )
            )

    success_count = sum(1 for r in results if r["status"] == "success")
    error_count = n_paths - success_count
    total_jumps = sum(r["path"].n_jumps for r in results if r["path"] is not None)
    logger.info(
        f"Simulation complete: {success_count} succeeded, {error_count} errors, "
        f"{total_jumps} total jumps"
    )
    return results
