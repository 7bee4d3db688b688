import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic_settings import BaseSettings, SettingsConfigDict

# Environment variable naming the default JSON config file
CONFIG_PATH_ENV = "MRCA_CONFIG"


class MrcaSettings(BaseSettings):
    """Numerical and runtime configuration for the MRCA-age toolkit."""

    # Quadrature
    quad_abs_tol: float = 1e-10
    quad_rel_tol: float = 1e-10
    quad_limit: int = 200

    # Root finding
    root_rel_tol: float = 1e-12
    max_bracket_doublings: int = 200

    # Endpoint divergence heuristic
    divergence_growth_factor: float = 1.5
    divergence_growth_run: int = 3
    divergence_refinements: int = 9
    convergence_rel_tol: float = 1e-10

    # Finite-difference density for tail-only custom measures
    density_step_rel: float = 1e-6
    density_step_min: float = 1e-12

    # exp(x) for x below this is returned as exactly 0
    underflow_exponent: float = -745.0

    # Simulation
    zero_resolution_fraction: float = 1e-6
    window_jump_cap: int = 10_000_000
    default_seed: int = 0

    # Statistics
    significance: float = 1e-3

    # Multiplies every numeric tolerance (slow machines, noisy platforms)
    tolerance_scale: float = 1.0

    # Paths
    log_path: Path = Path("data/log")
    output_path: Path = Path("data/output")

    # Configure to read environment variables with the prefix "MRCA_"
    model_config = SettingsConfigDict(
        env_prefix="MRCA_",
        env_file=".env",
        extra="ignore",
    )

    @property
    def scaled_abs_tol(self) -> float:
        return self.quad_abs_tol * self.tolerance_scale

    @property
    def scaled_rel_tol(self) -> float:
        return self.quad_rel_tol * self.tolerance_scale

    @property
    def scaled_root_tol(self) -> float:
        return self.root_rel_tol * self.tolerance_scale

    @property
    def scaled_convergence_tol(self) -> float:
        return self.convergence_rel_tol * self.tolerance_scale


_overrides: dict[str, Any] = {}


@lru_cache(maxsize=1)
def get_settings() -> MrcaSettings:
    """Get the MRCA settings singleton (environment, .env and active overrides)."""
    return MrcaSettings(**_overrides)


def configure_settings(**overrides: Any) -> MrcaSettings:
    """
    Rebuild the settings singleton with explicit overrides.

    Overrides with a value of None are ignored so that unset CLI flags fall through
    to the config file, the environment and finally the defaults.

    Args:
        **overrides: MrcaSettings field values.

    Returns:
        The rebuilt settings instance.
    """
    _overrides.update({key: value for key, value in overrides.items() if value is not None})
    get_settings.cache_clear()
    return get_settings()


def reset_settings() -> MrcaSettings:
    """Drop all overrides and rebuild the settings singleton."""
    _overrides.clear()
    get_settings.cache_clear()
    return get_settings()


def load_config_file(path: str | Path | None = None) -> dict[str, Any]:
    """
    Read a JSON config file of MrcaSettings field values.

    Args:
        path: Config file path. Defaults to the file named by MRCA_CONFIG, if any.

    Returns:
        The parsed mapping, empty when no config file is given.

    Raises:
        ConfigurationError: If the file is missing, unreadable or not a JSON object.
    """
    from mrca_dynamics.utils.exceptions import ConfigurationError

    if path is None:
        path = os.environ.get(CONFIG_PATH_ENV)
        if not path:
            return {}

    config_path = Path(path)
    try:
        payload = json.loads(config_path.read_text())
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {config_path}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {config_path} is not valid JSON: {e}") from e

    if not isinstance(payload, dict):
        raise ConfigurationError(f"Config file {config_path} must hold a JSON object")

    unknown = sorted(set(payload) - set(MrcaSettings.model_fields))
    if unknown:
        raise ConfigurationError(f"Unknown settings in {config_path}: {unknown}")
    return payload
