"""JSON documents for hypergroups, oracles and reports.

Canonical serialization: sorted keys, floats with 17 significant digits,
LF line endings.  Structure constants may be numbers or exact rationals
written as ``"p/q"`` strings.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .constructions import PRESETS, GroupTable, group_table
from .core import TOL, FiniteHypergroup, validate
from .errors import DocumentError

PRESET_PREFIX = "preset:"


def _number(value: Any) -> float:
    if isinstance(value, bool):
        raise DocumentError(f"boolean {value!r} is not a structure constant")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"cannot parse {value!r} as a rational") from exc
    raise DocumentError(f"unsupported constant {value!r}")


def from_document(doc: dict, tol: float = TOL) -> FiniteHypergroup:
    """Build and validate a hypergroup; axiom errors propagate unchanged."""
    try:
        order = int(doc["order"])
        involution = [int(v) for v in doc["involution"]]
        raw = doc["constants"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed hypergroup document: {exc}") from exc
    try:
        n = np.array([[[_number(v) for v in row] for row in plane] for plane in raw], dtype=float)
    except TypeError as exc:
        raise DocumentError("constants must be a 3-dimensional array") from exc
    if n.shape != (order, order, order):
        raise DocumentError(f"constants have shape {n.shape}, expected {(order,) * 3}")
    return validate(n, involution, name=str(doc.get("name", "")), tol=tol)


def to_document(K: FiniteHypergroup, metadata: dict | None = None) -> dict:
    doc = {
        "name": K.name,
        "order": K.order,
        "involution": list(K.involution),
        "constants": K.constants.tolist(),
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def load(source: str | Path, tol: float = TOL) -> FiniteHypergroup:
    """Load ``preset:NAME`` or a JSON document from disk."""
    source = str(source)
    if source.startswith(PRESET_PREFIX):
        name = source[len(PRESET_PREFIX):]
        try:
            return PRESETS[name]
        except KeyError:
            raise DocumentError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    return from_document(read_json(source), tol=tol)


def load_group(source: str | Path) -> GroupTable:
    doc = read_json(source)
    try:
        return group_table(doc["cayley"], name=str(doc.get("name", "")))
    except KeyError as exc:
        raise DocumentError("group document needs a 'cayley' table") from exc


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path} is not valid JSON: {exc}") from exc


def load_labels(path: str | Path) -> list[int]:
    doc = read_json(path)
    labels = doc.get("labels") if isinstance(doc, dict) else doc
    if not isinstance(labels, list):
        raise DocumentError("oracle document needs a 'labels' array")
    return [int(v) for v in labels]


# ---------------------------------------------------------------------------
# Canonical JSON
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise DocumentError(f"non-finite value {x} cannot be serialized")
    if x == 0:
        return "0.0"
    text = f"{x:.17g}"
    if "." not in text and "e" not in text and "inf" not in text:
        text += ".0"
    return text


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    return obj


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
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
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(k) + ": " + _emit(obj[k], indent, level + 1) for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise DocumentError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any, indent: int = 2) -> str:
    return _emit(_plain(obj), indent, 0) + "\n"


def digest(K: FiniteHypergroup) -> str:
    """sha256 of the canonical serialization of involution and constants."""
    body = canonical_json({"involution": list(K.involution), "constants": K.constants.tolist()}, indent=0)
    return hashlib.sha256(body.encode()).hexdigest()


def dump(K: FiniteHypergroup, path: str | Path, metadata: dict | None = None) -> None:
    Path(path).write_text(canonical_json(to_document(K, metadata)), encoding="utf-8", newline="\n")
