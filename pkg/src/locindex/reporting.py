"""Canonical JSON and flat CSV rendering of report dictionaries."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np

from .scalars import Cyclotomic, format_scalar


def canonical(obj):
    """Recursively convert a report into JSON-safe values with canonical scalar formatting."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (Fraction, Cyclotomic, complex, np.complexfloating)):
        return format_scalar(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report):
    return json.dumps(canonical(report), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _flatten(obj, prefix=""):
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif not isinstance(v, list):
            out[key] = v
    return out


def to_csv(report):
    """One header row and one value row holding the scalar leaves; lists stay JSON-only."""
    flat = _flatten(canonical(report))
    keys = sorted(flat)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    writer.writerow(["" if flat[k] is None else flat[k] for k in keys])
    return buf.getvalue()


def render(report, fmt="json"):
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")
