"""Plain-text file formats: diagram CSV, point-set CSV, distance-matrix CSV."""

from __future__ import annotations

import math
import os

import numpy as np

from .diagram import PersistenceDiagram
from .exceptions import DiagramInvariantError, DiagramParseError

__all__ = [
    "format_float",
    "read_diagram",
    "write_diagram",
    "read_point_set",
    "read_matrix",
    "write_matrix",
]


def format_float(x: float) -> str:
    """Shortest text that round-trips ``x`` exactly; integral values lose the ``.0``."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _rows(path):
    """Yield ``(lineno, fields)`` for every non-blank, non-comment line."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, [f.strip() for f in line.split(",")]


def _parse_floats(path, lineno, fields):
    try:
        return [float(f) for f in fields]
    except ValueError:
        raise DiagramParseError(path, lineno, f"cannot parse numbers from {','.join(fields)!r}") from None


def read_diagram(path: str | os.PathLike) -> PersistenceDiagram:
    """Read a ``birth,death`` per line diagram file. An empty file is the empty diagram."""
    pts = []
    for lineno, fields in _rows(path):
        if len(fields) != 2:
            raise DiagramParseError(path, lineno, f"expected 'birth,death', got {len(fields)} fields")
        b, d = _parse_floats(path, lineno, fields)
        if not (math.isfinite(b) and math.isfinite(d)):
            raise DiagramInvariantError(path, lineno, f"non-finite point ({b}, {d})")
        if not b < d:
            raise DiagramInvariantError(path, lineno, f"birth {b} is not < death {d}")
        pts.append((b, d))
    return PersistenceDiagram(pts)


def write_diagram(diagram, path: str | os.PathLike) -> None:
    arr = diagram.array if isinstance(diagram, PersistenceDiagram) else np.asarray(diagram)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for b, d in arr:
            fh.write(f"{format_float(b)},{format_float(d)}\n")


def read_point_set(path: str | os.PathLike) -> np.ndarray:
    """Read one vector per row; all rows must have the same length."""
    rows = []
    width = None
    for lineno, fields in _rows(path):
        vals = _parse_floats(path, lineno, fields)
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DiagramParseError(path, lineno, f"ragged row: {len(vals)} values, expected {width}")
        if not all(math.isfinite(v) for v in vals):
            raise DiagramParseError(path, lineno, "non-finite coordinate")
        rows.append(vals)
    if not rows:
        raise DiagramParseError(path, 0, "point set is empty")
    return np.array(rows, dtype=float)


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    """Read an ``n x n`` comma-separated matrix."""
    rows = [(lineno, _parse_floats(path, lineno, fields)) for lineno, fields in _rows(path)]
    if not rows:
        raise DiagramParseError(path, 0, "matrix is empty")
    n = len(rows)
    for lineno, row in rows:
        if len(row) != n:
            raise DiagramParseError(path, lineno, f"expected {n} columns for a square matrix, got {len(row)}")
    return np.array([row for _, row in rows], dtype=float)


def write_matrix(matrix, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in np.asarray(matrix, dtype=float):
            fh.write(",".join(format_float(x) for x in row) + "\n")
