"""
User-supplied lifetime measures: a tail callable (optional density) or a tail table.

Tables are interpolated linearly in (log x, log M), i.e. piecewise power laws,
and extrapolated at both ends by a power law fitted over the end decade and
anchored at the end node so that M stays continuous.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from mrca_dynamics.core.numerics import DivergenceVerdict, integrate
from mrca_dynamics.measures.base import LifetimeMeasure
from mrca_dynamics.models.params import CustomSpec
from mrca_dynamics.utils.exceptions import ConfigurationError


def _anchored_slope(log_x: np.ndarray, log_m: np.ndarray, anchor: int) -> float:
    """Least-squares log-log slope of a line forced through the anchor node."""
    dx = log_x - log_x[anchor]
    dm = log_m - log_m[anchor]
    denom = float(np.dot(dx, dx))
    if denom == 0.0:
        raise ConfigurationError("tail_table end decade needs at least two distinct nodes")
    return float(np.dot(dx, dm)) / denom


@dataclass(frozen=True)
class PowerLawTable:
    """
    Piecewise power-law interpolant of a tabulated tail.

    Attributes:
        log_x: Log of the table abscissae, strictly increasing.
        log_m: Log of the tabulated tail values, strictly decreasing.
        head_slope: Log-log slope used below the first node.
        tail_slope: Log-log slope used beyond the last node.
    """

    log_x: np.ndarray
    log_m: np.ndarray
    head_slope: float
    tail_slope: float

    @classmethod
    def from_rows(cls, rows: list[tuple[float, float]]) -> "PowerLawTable":
        xs = np.array([r[0] for r in rows], dtype=float)
        ms = np.array([r[1] for r in rows], dtype=float)
        log_x, log_m = np.log(xs), np.log(ms)

        head = log_x <= log_x[0] + math.log(10.0)
        if head.sum() < 2:
            head[:2] = True
        tail = log_x >= log_x[-1] - math.log(10.0)
        if tail.sum() < 2:
            tail[-2:] = True

        head_slope = _anchored_slope(log_x[head], log_m[head], 0)
        tail_slope = _anchored_slope(log_x[tail], log_m[tail], -1)
        if head_slope >= 0 or tail_slope >= 0:
            raise ConfigurationError("tail_table extrapolation must decrease at both ends")
        return cls(log_x=log_x, log_m=log_m, head_slope=head_slope, tail_slope=tail_slope)

    @property
    def nodes(self) -> tuple[float, ...]:
        return tuple(np.exp(self.log_x).tolist())

    def log_tail(self, x: float) -> float:
        lx = math.log(x)
        if lx < self.log_x[0]:
            return float(self.log_m[0] + self.head_slope * (lx - self.log_x[0]))
        if lx > self.log_x[-1]:
            return float(self.log_m[-1] + self.tail_slope * (lx - self.log_x[-1]))
        return float(np.interp(lx, self.log_x, self.log_m))

    def local_slope(self, x: float) -> float:
        lx = math.log(x)
        if lx < self.log_x[0]:
            return self.head_slope
        if lx >= self.log_x[-1]:
            return self.tail_slope
        i = int(np.searchsorted(self.log_x, lx, side="right")) - 1
        return float((self.log_m[i + 1] - self.log_m[i]) / (self.log_x[i + 1] - self.log_x[i]))

    def tail(self, x: float) -> float:
        return math.exp(self.log_tail(x))

    def density(self, x: float) -> float:
        return -self.tail(x) * self.local_slope(x) / x


class CustomMeasure(LifetimeMeasure):
    """
    Lifetime measure defined by a tail callable or a tail table.

    A callable without a density gets a centered finite-difference density.
    Tail integrals use quadrature in the log variable; whether int_0 M and
    int^inf M are finite is decided from the extrapolation slopes for tables and
    by the endpoint-divergence heuristic for callables.
    """

    def __init__(self, spec: CustomSpec):
        self._spec = spec
        self.table: Optional[PowerLawTable] = None
        self._tail_fn: Callable[[float], float]
        self._density_fn: Optional[Callable[[float], float]] = spec.density

        if spec.tail is not None:
            self._tail_fn = spec.tail
        else:
            self.table = PowerLawTable.from_rows(spec.tail_table)
            self._tail_fn = self.table.tail
            if self._density_fn is None:
                self._density_fn = self.table.density
            self.breakpoints = self.table.nodes

    @classmethod
    def from_callable(
        cls,
        tail: Callable[[float], float],
        density: Optional[Callable[[float], float]] = None,
        name: str = "custom",
    ) -> "CustomMeasure":
        return cls(CustomSpec(tail=tail, density=density, name=name))

    @classmethod
    def from_table(cls, rows: list[tuple[float, float]]) -> "CustomMeasure":
        return cls(CustomSpec(tail_table=[tuple(r) for r in rows]))

    @property
    def spec(self) -> CustomSpec:
        return self._spec

    @property
    def name(self) -> str:
        return self._spec.name

    def _tail(self, x: float) -> float:
        return float(self._tail_fn(x))

    def _density(self, x: float) -> float:
        if self._density_fn is not None:
            return float(self._density_fn(x))
        return super()._density(x)

    def _decide_zero_integral(self) -> DivergenceVerdict:
        if self.table is None:
            return super()._decide_zero_integral()
        return self._table_verdict(at_zero=True)

    def _decide_infinity_integral(self) -> DivergenceVerdict:
        if self.table is None:
            return super()._decide_infinity_integral()
        return self._table_verdict(at_zero=False)

    def _table_verdict(self, at_zero: bool) -> DivergenceVerdict:
        """Decide int_0^1 M or int_1^inf M from the extrapolation slope, exactly."""
        table = self.table
        slope = table.head_slope if at_zero else table.tail_slope
        finite = slope > -1.0 if at_zero else slope < -1.0
        if not finite:
            return DivergenceVerdict("diverges", math.inf, 0)

        x0, x1 = math.exp(table.log_x[0]), math.exp(table.log_x[-1])
        if at_zero:
            # int_0^{x0} of the head power law, then the table up to 1
            value = self._tail(x0) * x0 / (slope + 1.0)
            value += self._tail_between(x0, 1.0) if x0 < 1.0 else -self._tail_between(1.0, x0)
        else:
            value = -self._tail(x1) * x1 / (slope + 1.0)
            value += self._tail_between(1.0, x1) if x1 > 1.0 else -self._tail_between(x1, 1.0)
        return DivergenceVerdict("converges", value, 0)

    def check_consistency(self, y: float, x: float) -> float:
        """Relative gap between M(y) - M(x) and the quadrature of the density over [y, x]."""
        direct = self._tail(y) - self._tail(x)
        quad = integrate(self._density, y, x, points=self.breakpoints).value
        return abs(direct - quad) / max(abs(direct), 1e-300)
