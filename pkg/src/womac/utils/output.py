"""
Deterministic file writers.

Outputs never carry timestamps or host details, so rerunning a command with
the same inputs reproduces every file byte for byte.
"""
import json
import os
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from womac.errors import InputIOError


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def ensure_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise InputIOError(f"Could not create output directory '{path}': {e}", path=path)


def write_json(path: str, payload: Dict[str, Any]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(_jsonable(payload), f, indent=2, allow_nan=False)
            f.write("\n")
    except OSError as e:
        raise InputIOError(f"Could not write '{path}': {e}", path=path)


def write_csv(path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
    frame = pd.DataFrame(rows, columns=list(columns))
    try:
        frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")
    except OSError as e:
        raise InputIOError(f"Could not write '{path}': {e}", path=path)
