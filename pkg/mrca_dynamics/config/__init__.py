from mrca_dynamics.config.logging import configure_logging, get_logger
from mrca_dynamics.config.settings import (
    MrcaSettings,
    configure_settings,
    get_settings,
    load_config_file,
    reset_settings,
)

__all__ = [
    "configure_logging",
    "get_logger",
    "get_settings",
    "configure_settings",
    "reset_settings",
    "load_config_file",
    "MrcaSettings",
]
