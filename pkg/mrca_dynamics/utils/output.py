"""
Machine-readable output: CSV tables through pandas and JSON reports.

Floats are written with 17 significant digits so that runs can be compared byte
for byte. Non-finite floats become the strings "inf" / "-inf" and NaN becomes null.
"""

import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from mrca_dynamics.config.logging import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def _json_ready(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_ready(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Path):
        return str(value)
    return value


def save_text(text: str, out: Optional[Union[str, Path]] = None) -> None:
    """
    Write text to a file (parent directories created) or to stdout.

    Args:
        text: Payload.
        out: Destination path; None writes to stdout.
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    local_path = Path(out)
    os.makedirs(local_path.parent, exist_ok=True)
    local_path.write_text(text)
    logger.debug(f"Saved to: {local_path}")


def write_csv(frame: pd.DataFrame, out: Optional[Union[str, Path]] = None) -> str:
    """Render a table as CSV with round-trip float precision and emit it."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    save_text(text, out)
    return text


def write_json(payload: Any, out: Optional[Union[str, Path]] = None) -> str:
    """Render a payload as indented JSON and emit it."""
    text = json.dumps(_json_ready(payload), indent=2) + "\n"
    save_text(text, out)
    return text
