"""CSV/JSON writers.  Floats in CSV use 9 significant digits so output is byte-stable."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FLOAT_FMT = "{:.9g}"


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return FLOAT_FMT.format(v)
    return str(value)


def to_builtin(obj):
    """Recursively convert numpy scalars/arrays so ``json`` can encode them."""
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_builtin(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj) -> str:
    return json.dumps(to_builtin(obj), indent=2) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence], fmt_name: str = "csv") -> Path:
    """Write rows as CSV, or as a JSON list of records when ``fmt_name == 'json'``."""
    path = Path(path)
    rows = list(rows)
    if fmt_name == "json":
        path = path.with_suffix(".json")
        # round-trip through the CSV formatter so both formats carry identical values
        records = [{h: _parse(fmt(v)) for h, v in zip(header, row)} for row in rows]
        text = dumps(records)
    else:
        path = path.with_suffix(".csv")
        text = csv_text(header, rows)
    path.write_text(text, encoding="utf-8")
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def _parse(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        v = float(s)
    except ValueError:
        return s
    return None if math.isnan(v) else v


def trajectory_rows(ibar: np.ndarray):
    return ((t, v) for t, v in enumerate(ibar.tolist()))


TRAJECTORY_HEADER = ("t", "i_bar")
MC_HEADER = ("t", "i_bar_mean", "i_bar_std")
BOUNDS_HEADER = ("node", "deg", "theta_minus", "theta_plus")
PROFILE_HEADER = ("k", "count", "i_star_eq53")
PROFILE_MC_HEADER = ("k", "count", "i_star_eq53", "i_star_mc")
RUNNING_HEADER = ("t", "i_bar", "i_panel_running")
SWEEP_HEADER = ("x", "abs_error")
SIMULATE_HEADER = ("t", "i_bar_model", "i_bar_mc", "i_bar_mc_std", "theta_minus_avg", "theta_plus_avg")
