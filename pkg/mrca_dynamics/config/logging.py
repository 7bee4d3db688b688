"""
Logging setup for mrca_dynamics.

Package loggers write to stderr so that CSV and JSON on stdout stay clean. Records at
ERROR and above are also appended to `<log_path>/errors/error_log.txt`, where log_path
comes from the active MrcaSettings at configuration time. Python warnings (scipy's
IntegrationWarning in particular) are captured and logged under `py.warnings`.
"""

import logging
import logging.config
from pathlib import Path
from typing import Any

from mrca_dynamics.config.settings import get_settings

PACKAGE_LOGGER = "mrca_dynamics"

DETAILED_FORMAT = "%(asctime)s-%(levelname)s-%(name)s:%(funcName)s:%(lineno)s %(message)s"
SHORT_FORMAT = "%(levelname)s - %(message)s"

_configured = False


def error_log_file(log_path: Path | None = None) -> Path:
    """Error log location under log_path (default: the configured log_path)."""
    root = get_settings().log_path if log_path is None else Path(log_path)
    return root / "errors" / "error_log.txt"


def _logging_config(verbose: bool, error_log: Path) -> dict[str, Any]:
    level = "DEBUG" if verbose else "INFO"
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "detailed": {"format": DETAILED_FORMAT, "datefmt": "%Y-%m-%dT%H:%M:%S"},
            "short": {"format": SHORT_FORMAT},
        },
        "handlers": {
            "stderr": {
                "level": level,
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": "detailed" if verbose else "short",
            },
            "error_file": {
                "level": "ERROR",
                "class": "logging.FileHandler",
                "formatter": "detailed",
                "filename": str(error_log),
                "mode": "a",
                "delay": True,
            },
        },
        "loggers": {
            "": {"handlers": ["stderr"], "level": "WARNING"},
            PACKAGE_LOGGER: {
                "handlers": ["stderr", "error_file"],
                "propagate": False,
                "level": level,
            },
            "py.warnings": {"handlers": ["stderr"], "propagate": False, "level": "WARNING"},
        },
    }


def configure_logging(verbose: bool = False) -> Path:
    """
    Install the package logging configuration.

    Call again after changing log_path in the settings to move the error log.

    Args:
        verbose: DEBUG level with the detailed format instead of INFO.

    Returns:
        Path of the error log file (created lazily on the first error).
    """
    global _configured

    error_log = error_log_file()
    error_log.parent.mkdir(parents=True, exist_ok=True)
    logging.config.dictConfig(_logging_config(verbose, error_log))
    logging.captureWarnings(True)
    _configured = True
    return error_log


def get_logger(name: str, verbose: bool = False) -> logging.Logger:
    """Logger for name; configures logging on first use or when verbose is requested."""
    if verbose or not _configured:
        configure_logging(verbose)
    return logging.getLogger(name)
