"""
Matrix JSON format: {"n": rows, "entries": [[[re, im], ...], ...]} row-major.

Rectangular matrices (Kraus isometries) also carry "n_cols".
"""

import math
from typing import Any, Dict, List

import numpy as np

from ..errors import DimensionMismatchError, DomainViolationError


def matrix_to_json(X: np.ndarray) -> Dict[str, Any]:
    a = np.asarray(X, dtype=complex)
    data: Dict[str, Any] = {
        "n": int(a.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a],
    }
    if a.shape[0] != a.shape[1]:
        data["n_cols"] = int(a.shape[1])
    return data


def _entry(raw: Any, row: int, col: int) -> complex:
    if isinstance(raw, (int, float)):
        re, im = float(raw), 0.0
    elif isinstance(raw, (list, tuple)) and len(raw) == 2:
        re, im = float(raw[0]), float(raw[1])
    else:
        raise DimensionMismatchError(f"Entry ({row}, {col}) must be [re, im], got {raw!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DomainViolationError(f"Entry ({row}, {col}) is not finite")
    return complex(re, im)


def matrix_from_json(data: Dict[str, Any]) -> np.ndarray:
    """
    Parse a matrix from its JSON form.

    Raises:
        DimensionMismatchError: if the entry grid disagrees with the declared shape
        DomainViolationError: on non-finite values
    """
    try:
        n_rows = int(data["n"])
        rows: List[List[Any]] = data["entries"]
    except (KeyError, TypeError, ValueError) as e:
        raise DimensionMismatchError(f"Malformed matrix JSON: {e}")
    n_cols = int(data.get("n_cols", n_rows))
    if n_rows <= 0 or n_cols <= 0 or len(rows) != n_rows:
        raise DimensionMismatchError(f"Expected {n_rows} rows, got {len(rows)}")
    out = np.zeros((n_rows, n_cols), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise DimensionMismatchError(f"Row {i} has {len(row)} entries, expected {n_cols}")
        for j, raw in enumerate(row):
            out[i, j] = _entry(raw, i, j)
    return out
