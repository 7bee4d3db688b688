"""Result containers shared by the simulation, classification and testing layers."""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Literal, Optional

import numpy as np

Verdict = Literal["yes", "no", "inconclusive"]
ChainVerdict = Literal["transient", "null_recurrent", "positive_recurrent", "inconclusive"]


@dataclass
class PathSample:
    """
    A saw-tooth MRCA-age trajectory on [0, horizon].

    Attributes:
        x0: Initial state.
        horizon: Duration of the path.
        jump_times: Strictly increasing jump times T_n in (0, horizon].
        peaks: Left limits L_n at the jumps.
        troughs: Post-jump values R_n, 0 <= R_n < L_n.
        zero_intervals: (start, end) intervals stepped with the exact kernel at the
            zero resolution t0. Sub-t0 structure inside them is not represented.
        coarse: Boolean mask marking jumps recorded by a t0 kernel step rather than
            by the exact jump mechanism.
        stream: Random stream id that produced the path, if any.
    """

    x0: float
    horizon: float
    jump_times: np.ndarray
    peaks: np.ndarray
    troughs: np.ndarray
    zero_intervals: list[tuple[float, float]] = field(default_factory=list)
    coarse: Optional[np.ndarray] = None
    stream: Optional[int] = None

    def __post_init__(self):
        self.jump_times = np.asarray(self.jump_times, dtype=float)
        self.peaks = np.asarray(self.peaks, dtype=float)
        self.troughs = np.asarray(self.troughs, dtype=float)
        if not (len(self.jump_times) == len(self.peaks) == len(self.troughs)):
            raise ValueError("jump_times, peaks and troughs must have equal length")
        if self.coarse is None:
            self.coarse = np.zeros(len(self.jump_times), dtype=bool)
        else:
            self.coarse = np.asarray(self.coarse, dtype=bool)
        if self.x0 < 0 or self.horizon <= 0:
            raise ValueError(f"invalid path bounds x0={self.x0}, horizon={self.horizon}")

    @property
    def n_jumps(self) -> int:
        return int(len(self.jump_times))

    @property
    def jumps(self) -> list[tuple[float, float, float]]:
        """Ordered (T_n, L_n, R_n) triples."""
        return list(zip(self.jump_times.tolist(), self.peaks.tolist(), self.troughs.tolist()))

    def value_at(self, t):
        """
        Evaluate A(t) (right-continuous) at a time or an array of times in [0, horizon].

        Raises:
            ValueError: If any t lies outside [0, horizon].
        """
        times = np.asarray(t, dtype=float)
        if np.any(times < 0) or np.any(times > self.horizon):
            raise ValueError(f"t must lie in [0, {self.horizon}]")
        idx = np.searchsorted(self.jump_times, times, side="right") - 1
        base_value = np.where(idx >= 0, self.troughs[np.maximum(idx, 0)], self.x0)
        base_time = np.where(idx >= 0, self.jump_times[np.maximum(idx, 0)], 0.0)
        values = base_value + (times - base_time)
        return float(values) if values.ndim == 0 else values

    def gaps(self) -> np.ndarray:
        """Inter-jump intervals T_n - T_{n-1} (the first gap is measured from 0)."""
        return np.diff(self.jump_times, prepend=0.0)

    def jump_sizes(self) -> np.ndarray:
        return self.peaks - self.troughs

    def truncate(self, horizon: float) -> "PathSample":
        """Restrict the path to [0, horizon]."""
        if not 0 < horizon <= self.horizon:
            raise ValueError(f"horizon must lie in (0, {self.horizon}], got {horizon}")
        keep = self.jump_times <= horizon
        zeros = [(a, min(b, horizon)) for a, b in self.zero_intervals if a < horizon]
        return PathSample(
            x0=self.x0,
            horizon=horizon,
            jump_times=self.jump_times[keep],
            peaks=self.peaks[keep],
            troughs=self.troughs[keep],
            zero_intervals=zeros,
            coarse=self.coarse[keep],
            stream=self.stream,
        )

    def resolved_jump_count(self, start: float = 0.0, end: Optional[float] = None) -> int:
        """Number of exact-mechanism jumps with start < T_n <= end."""
        end = self.horizon if end is None else end
        window = (self.jump_times > start) & (self.jump_times <= end) & ~self.coarse
        return int(np.count_nonzero(window))

    def drift_residual(self) -> float:
        """Largest relative violation of L_n = R_{n-1} + (T_n - T_{n-1})."""
        if self.n_jumps == 0:
            return 0.0
        previous = np.concatenate(([self.x0], self.troughs[:-1]))
        reconstructed = previous + self.gaps()
        scale = np.maximum(1.0, np.abs(self.peaks))
        return float(np.max(np.abs(reconstructed - self.peaks) / scale))


@dataclass
class JumpChainSample:
    """
    Alternating peak/trough chain L_0, R_0, L_1, R_1, ...

    Attributes:
        start_kind: "peak" or "trough", the kind of the supplied start value.
        start: Start value. For a peak start it equals L_0.
        peaks: L_n, n = 0..len-1.
        troughs: R_n. May be one shorter than peaks when the chain was absorbed.
        absorbed_at_zero: True if a trough hit 0 (or underflowed), ending the chain.
    """

    start_kind: Literal["peak", "trough"]
    start: float
    peaks: np.ndarray
    troughs: np.ndarray
    absorbed_at_zero: bool = False

    def __post_init__(self):
        self.peaks = np.asarray(self.peaks, dtype=float)
        self.troughs = np.asarray(self.troughs, dtype=float)

    @property
    def n(self) -> int:
        return int(len(self.troughs))

    def interleaved(self) -> np.ndarray:
        """The chain as one array L_0, R_0, L_1, R_1, ..."""
        out = np.empty(len(self.peaks) + len(self.troughs))
        out[0::2] = self.peaks
        out[1::2] = self.troughs
        return out


@dataclass
class RecordSet:
    """
    Birth/lifetime pairs of the families that are at some moment the oldest alive.

    Attributes:
        births: Birth times s, strictly increasing.
        lifetimes: Lifetimes y; deaths s + y are strictly increasing.
        window: The time window [0, T] on which the set is complete.
        closed: True once every record relevant to the window is known.
    """

    births: np.ndarray
    lifetimes: np.ndarray
    window: float
    closed: bool = True

    def __post_init__(self):
        self.births = np.asarray(self.births, dtype=float)
        self.lifetimes = np.asarray(self.lifetimes, dtype=float)
        if len(self.births) != len(self.lifetimes):
            raise ValueError("births and lifetimes must have equal length")

    @property
    def deaths(self) -> np.ndarray:
        return self.births + self.lifetimes

    def __len__(self) -> int:
        return int(len(self.births))

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.births.tolist(), self.lifetimes.tolist()))


@dataclass(frozen=True)
class CriterionValue:
    """
    One evaluated classification integral.

    Attributes:
        name: Criterion key.
        value: Integral value, math.inf when divergent, math.nan when undecided.
        status: "finite", "divergent" or "inconclusive".
        method: "analytic", "quadrature" or "heuristic".
    """

    name: str
    value: float
    status: Literal["finite", "divergent", "inconclusive"]
    method: Literal["analytic", "quadrature", "heuristic"]

    def to_dict(self) -> dict[str, Any]:
        value = self.value
        return {
            "name": self.name,
            "value": None if math.isnan(value) else ("inf" if math.isinf(value) else value),
            "status": self.status,
            "method": self.method,
        }


@dataclass
class ClassificationReport:
    """
    Regime verdicts for a lifetime measure.

    Attributes:
        returns_to_zero: Whether the process started at x > 0 ever hits 0.
        point_recurrent: Whether the process revisits every state (liminf A_t finite)
            rather than drifting to infinity.
        has_stationary: Whether a stationary law exists (integrated tail finite).
        jump_chain: Recurrence class of the peak and trough chains.
        criterion_values: The evaluated integrals keyed by criterion name.
        measure: The JSON form of the measure specification, when serializable.
    """

    returns_to_zero: Verdict
    point_recurrent: Verdict
    has_stationary: Verdict
    jump_chain: ChainVerdict
    criterion_values: dict[str, CriterionValue]
    measure: Optional[dict[str, Any]] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "measure": self.measure,
            "returns_to_zero": self.returns_to_zero,
            "point_recurrent": self.point_recurrent,
            "has_stationary": self.has_stationary,
            "jump_chain": self.jump_chain,
            "criterion_values": {k: v.to_dict() for k, v in self.criterion_values.items()},
        }


@dataclass(frozen=True)
class ComparisonResult:
    """One distributional comparison inside a test report."""

    comparison: str
    statistic: float
    p_value: float
    n: int
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class TestReport:
    """
    Aggregated outcome of a family of distributional comparisons.

    Attributes:
        comparisons: KS-type comparisons with statistics and p-values.
        moments: Extra functional checks (estimate pairs with standard errors).
        significance: Per-comparison significance level.
        note: Multiple-testing note.
    """

    __test__ = False

    comparisons: list[ComparisonResult]
    moments: list[dict[str, Any]] = field(default_factory=list)
    significance: float = 1e-3
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.comparisons) and all(
            m.get("passed", True) for m in self.moments
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "significance": self.significance,
            "note": self.note,
            "comparisons": [c.to_dict() for c in self.comparisons],
            "moments": self.moments,
        }


@dataclass
class SuiteResult:
    """
    Outcome of one acceptance suite.

    Attributes:
        name: Suite name.
        passed: True when every check passed.
        checks: One mapping per check with at least "check" and "passed" keys.
        significance: Per-comparison significance level of the statistical checks.
        note: Multiple-testing note and sample sizes.
        elapsed: Wall-clock seconds.
    """

    name: str
    passed: bool
    checks: list[dict[str, Any]]
    significance: float
    note: str = ""
    elapsed: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
