"""Reproducible text output: every float is printed with 9 significant digits."""

from __future__ import annotations

import json
from pathlib import Path


def format_float(x: float) -> str:
    return f"{float(x):.9g}"


def json_ready(obj):
    """Recursively round floats to 9 significant digits for stable JSON bytes."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(format_float(obj))
    if isinstance(obj, dict):
        return {k: json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    return obj


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(json_ready(obj), indent=2) + "\n")
