"""
Pytest configuration and fixtures.

Author: Peter Kongstad
"""

import math

import pytest

from mrca_dynamics.config.settings import reset_settings
from mrca_dynamics.measures import (
    HyperbolicMeasure,
    LogStableMeasure,
    ParetoMeasure,
    StableMeasure,
)
from mrca_dynamics.simulation.rng import make_rng


@pytest.fixture(autouse=True)
def clean_settings(tmp_path, monkeypatch):
    """Start every test from default settings with logs under a temporary directory."""
    monkeypatch.delenv("MRCA_CONFIG", raising=False)
    monkeypatch.setenv("MRCA_LOG_PATH", str(tmp_path / "log"))
    settings = reset_settings()
    yield settings
    monkeypatch.undo()
    reset_settings()


@pytest.fixture
def settings(clean_settings):
    """Provide the active MrcaSettings instance."""
    return clean_settings


@pytest.fixture
def stable_one():
    """Stable measure at beta = 1 (Feller genealogy), M(x) = 2/x."""
    return StableMeasure(beta=1.0)


@pytest.fixture
def stable_half():
    """Stable measure at beta = 0.5, M(x) = 3/x."""
    return StableMeasure(beta=0.5)


@pytest.fixture
def hyperbolic_two():
    """Positive recurrent hyperbolic measure (alpha = 2)."""
    return HyperbolicMeasure(alpha=2.0)


@pytest.fixture
def hyperbolic_half():
    """Transient hyperbolic measure (alpha = 0.5), the process hits zero."""
    return HyperbolicMeasure(alpha=0.5)


@pytest.fixture
def pareto():
    """Pareto measure M(x) = 1/x^2 with stationary cdf exp(-1/x)."""
    return ParetoMeasure(a=1.0, p=2.0)


@pytest.fixture
def pareto_light():
    """Pareto measure with p < 1: int_0 M is finite so jumps can land on 0."""
    return ParetoMeasure(a=1.0, p=0.5)


@pytest.fixture
def logstable():
    """Log-time-changed stable measure at beta = 0.5."""
    return LogStableMeasure(beta=0.5)


@pytest.fixture
def rng():
    """Seeded generator on stream 0."""
    return make_rng(12345)


@pytest.fixture
def table_rows():
    """Tail table sampled from M(x) = 1/x^2 over four decades."""
    xs = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0]
    return [(x, 1.0 / x**2) for x in xs]


@pytest.fixture
def zero_reachable():
    """Tabulated measure with M(x) = x^-1/2 near 0 and exp(1 - x) beyond 1.

    int_0 M is finite, so jumps land on 0, and a stationary law exists.
    """
    from mrca_dynamics.measures import CustomMeasure

    xs = [0.01, 0.03, 0.1, 0.3, 1.0, 2.0, 3.0, 5.0, 8.0]
    rows = [(x, x**-0.5 if x <= 1.0 else math.exp(1.0 - x)) for x in xs]
    return CustomMeasure.from_table(rows)
