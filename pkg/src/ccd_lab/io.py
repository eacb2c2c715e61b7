"""JSON and CSV serialization for matrices and reports.

Matrix files look like ``{"n": 2, "entries": [[re, im], ...]}`` with the
entries in row-major order.  Matrices whose size is not a power of two (for
example structured Hamiltonians of size 2l) carry an explicit ``"dim"``.
Floats are written with Python's shortest round-trip representation, so a
write/read cycle reproduces every entry bit for bit.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import CcdLabError, DimensionError


class InputFormatError(CcdLabError):
    pass


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    dim = m.shape[0]
    out: dict = {}
    if _is_power_of_two(dim):
        out["n"] = dim.bit_length() - 1
    else:
        out["dim"] = dim
    out["entries"] = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return out


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InputFormatError("matrix object needs an 'entries' list")
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in obj["entries"]])
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed entries: {exc}") from None
    if "dim" in obj:
        dim = int(obj["dim"])
    elif "n" in obj:
        n = int(obj["n"])
        if not 0 <= n <= 30:
            raise InputFormatError(f"implausible qubit count {n}")
        dim = 1 << n
    else:
        dim = math.isqrt(flat.size)
    if dim * dim != flat.size:
        raise DimensionError(f"expected {dim * dim} entries, found {flat.size}")
    if not np.all(np.isfinite(flat)):
        raise InputFormatError("entries must be finite")
    return flat.reshape(dim, dim)


def read_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from None
    try:
        return matrix_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from None


def write_matrix(path, m: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(m)) + "\n")


def complex_list(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.ravel(np.asarray(values, dtype=complex))]


def jsonable(obj):
    """Recursively convert numpy and complex values to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return complex_list(obj) if obj.ndim == 1 else matrix_to_json(obj)
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, allow_nan=False) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else jsonable(x) for x in row])
    return buf.getvalue()
