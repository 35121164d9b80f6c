"""JSON input formats for arrangements and Gaudin presets."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from . import exact
from .arrangement import ArrangementFamily
from .gaudin.data import GaudinData


class InputError(ValueError):
    """Malformed input file; the message carries line/column when known."""


def _read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return obj


def _scalar(value, where):
    try:
        return exact.to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot read {value!r} as a rational number") from exc


def arrangement_from_dict(obj: dict, source: str = "<input>"):
    """``{"k", "n", "B", "a", "labels"?, "z"?}`` to ``(family, z or None)``."""
    for key in ("B", "a"):
        if key not in obj:
            raise InputError(f"{source}: missing key {key!r}")
    rows = obj["B"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{source}: 'B' must be a list of rows")
    B = [[_scalar(v, f"{source}: B[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
    a = [_scalar(v, f"{source}: a[{i}]") for i, v in enumerate(obj["a"])]
    n = obj.get("n", len(B))
    k = obj.get("k", len(B[0]))
    if n != len(B) or any(len(r) != k for r in B):
        raise InputError(f"{source}: 'B' must be an n x k matrix with n={n}, k={k}")
    try:
        family = ArrangementFamily(k, n, tuple(map(tuple, B)), tuple(a), tuple(obj.get("labels", ())))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from exc
    z = None
    if "z" in obj:
        z = [_scalar(v, f"{source}: z[{i}]") for i, v in enumerate(obj["z"])]
        if len(z) != n:
            raise InputError(f"{source}: 'z' must have {n} entries")
    return family, z


def load_arrangement(path):
    return arrangement_from_dict(_read_json(path), str(path))


def arrangement_to_dict(family: ArrangementFamily, z=None) -> dict:
    out = {"k": family.k, "n": family.n,
           "B": [[exact.fraction_str(v) for v in row] for row in family.linear_parts],
           "a": [exact.fraction_str(v) for v in family.weights], "labels": list(family.labels)}
    if z is not None:
        out["z"] = [exact.fraction_str(v) for v in z]
    return out


def gaudin_from_dict(obj: dict, source: str = "<input>") -> GaudinData:
    """``{"algebra": "sl2"|"gl2", "weights", "k", "x"}``; sl2 weights are Dynkin labels."""
    for key in ("algebra", "weights", "k", "x"):
        if key not in obj:
            raise InputError(f"{source}: missing key {key!r}")
    k = obj["k"]
    k = [k] if isinstance(k, int) else k
    x = [_scalar(v, f"{source}: x[{i}]") for i, v in enumerate(obj["x"])]
    try:
        if obj["algebra"] == "sl2":
            weights = [_scalar(v, f"{source}: weights[{i}]") for i, v in enumerate(obj["weights"])]
            return GaudinData.sl2(weights, k, x, obj.get("alpha_sq", 2))
        if obj["algebra"] == "gl2":
            return GaudinData.gl2(obj["weights"], k, x)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{source}: {exc}") from exc
    raise InputError(f"{source}: algebra must be 'sl2' or 'gl2'")


def load_gaudin(path) -> GaudinData:
    return gaudin_from_dict(_read_json(path), str(path))


def data_path(name: str) -> Path:
    """Path of a bundled example file."""
    return Path(str(resources.files("hyperbethe") / "data" / name))
