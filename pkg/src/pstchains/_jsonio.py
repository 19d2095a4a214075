"""Deterministic JSON output: stable key order, floats at 17 significant digits."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

SCHEMA = "pst-chains/1"


def format_float(value: float) -> str:
    """Round-trip-exact text for a finite float; non-finite values become null."""
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating, Fraction)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items())
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # numeric vectors stay on one line
        if all(isinstance(v, (int, float, np.number, Fraction)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_encode(v, 0, 0) for v in seq) + "]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in seq) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict, indent: int = 2) -> str:
    """Serialize with ``"schema"`` as the first key."""
    body = {"schema": SCHEMA}
    body.update((k, v) for k, v in payload.items() if k != "schema")
    return _encode(body, indent, 0) + "\n"
