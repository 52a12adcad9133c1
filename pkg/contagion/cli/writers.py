"""CSV and JSON output: header rows, 17 significant digits, empty cells for missing values."""
import json
import math
import os
from typing import Any

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    if value is None or value is pd.NA:
        return None
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def frame_records(frame: pd.DataFrame) -> list[dict[str, Any]]:
    """Rows as plain dicts (numpy scalars unwrapped, missing values as None)."""
    return [_plain(row) for row in frame.to_dict(orient="records")]


def write_csv(frame: pd.DataFrame, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return path


def write_json(data: Any, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(_plain(data), f, indent=2, allow_nan=False)
        f.write("\n")
    return path


def write_table(frame: pd.DataFrame, out_dir: str, stem: str, fmt: str) -> str:
    """Write ``frame`` as ``<stem>.csv`` or ``<stem>.json`` under ``out_dir``."""
    if fmt == "json":
        return write_json(frame_records(frame), os.path.join(out_dir, f"{stem}.json"))
    return write_csv(frame, os.path.join(out_dir, f"{stem}.csv"))
