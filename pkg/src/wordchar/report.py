"""Serialization of results as JSON, CSV or plain text.

JSON is byte-stable: keys are sorted, rationals are ``"p/q"`` strings,
polynomials are arrays of such strings (lowest degree first) and rational
functions are ``{"num": [...], "den": [...]}``.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .algebra import ExactPolynomial, ExactRationalFunction, fraction_to_json
from .symmetric import YoungDiagram

__all__ = ["to_jsonable", "render_json", "render_csv", "render_text", "emit_report", "format_rational",
           "SPECTRAL_COLUMNS"]

SPECTRAL_COLUMNS = ("seed", "n", "k", "r", "lambda_nontrivial", "bound", "iterations", "connected")


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return fraction_to_json(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (ExactPolynomial, ExactRationalFunction)):
        return obj.to_json()
    if isinstance(obj, YoungDiagram):
        return str(obj)
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return fraction_to_json(v)
    return str(v)


def render_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def format_rational(f: ExactRationalFunction | ExactPolynomial, var: str = "n") -> str:
    """``"num / den"`` with parentheses around multi-term pieces."""
    return f.to_str(var)


def _text_value(v: Any, var: str) -> str:
    if isinstance(v, (ExactRationalFunction, ExactPolynomial)):
        return format_rational(v, var)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return ", ".join(_text_value(x, var) for x in v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(x, var)}" for k, x in v.items()) + "}"
    return str(v)


def render_text(payload: dict, var: str = "n") -> str:
    lines = []
    for key, value in payload.items():
        lines.append(f"{key}: {_text_value(value, var)}")
    return "\n".join(lines) + "\n"


def emit_report(payload: Any, fmt: str = "json", path: str | Path | None = None,
                columns: Sequence[str] | None = None, var: str = "n") -> str:
    """Render ``payload`` and write it to ``path`` (or stdout when ``path`` is None).

    For ``csv`` the payload must be a sequence of row dicts.
    """
    if fmt == "json":
        text = render_json(payload)
    elif fmt == "csv":
        if columns is None:
            raise ValueError("csv output needs column names")
        text = render_csv(payload, columns)
    elif fmt == "text":
        text = render_text(payload, var) if isinstance(payload, dict) else str(payload) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text
