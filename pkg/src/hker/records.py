"""Canonical serialization for command output.

Floats are written with 17 significant digits and keys keep insertion order,
so parsing an emitted record and emitting it again reproduces the same bytes.
"""
from __future__ import annotations

import json
import math


def format_float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    # -0.0 would come back from the parser as integer 0
    return format(v + 0.0, ".17g")


def scalar_record(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def dumps(obj) -> str:
    """One-line JSON with fixed float formatting."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return dumps(scalar_record(obj))
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def loads(text: str):
    return json.loads(text)
