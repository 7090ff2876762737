"""Series ingestion and atomic, full-precision output writers."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .exceptions import SeriesFormatError

__all__ = ["SeriesSpec", "load_series", "atomic_write", "write_csv", "write_json", "fmt", "write_plain"]

FORMATS = ("plain", "csv")
TRANSFORMS = ("none", "log-returns", "cumsum")


@dataclass(frozen=True)
class SeriesSpec:
    """Where a series lives and how to turn it into the analysed values.

    ``format`` is ``"plain"`` (one value per line) or ``"csv"`` (header row,
    values in ``column``). ``transform`` is ``"none"``, ``"log-returns"`` or
    ``"cumsum"``.
    """

    path: str
    format: str = "plain"
    column: Optional[str] = None
    transform: str = "none"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.transform not in TRANSFORMS:
            raise ValueError(f"unknown transform {self.transform!r}")
        if self.format == "csv" and not self.column:
            raise ValueError("csv format needs a column name")


def _parse(text: str, lineno: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise SeriesFormatError(f"line {lineno}: not a number: {text.strip()!r}", lineno) from None
    if not math.isfinite(v):
        raise SeriesFormatError(f"line {lineno}: non-finite value", lineno)
    return v


def _read_plain(path):
    values, lines = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            values.append(_parse(s, lineno))
            lines.append(lineno)
    return values, lines


def _read_csv(path, column):
    values, lines = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SeriesFormatError("line 1: empty file", 1)
        header = [h.strip() for h in header]
        if column not in header:
            raise SeriesFormatError(f"line 1: no column {column!r} in header", 1)
        j = header.index(column)
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if j >= len(row) or not row[j].strip():
                raise SeriesFormatError(f"line {lineno}: missing field {column!r}", lineno)
            values.append(_parse(row[j], lineno))
            lines.append(lineno)
    return values, lines


def load_series(spec: SeriesSpec) -> np.ndarray:
    """Read, validate and transform a series. Parse errors name the offending line."""
    reader = _read_plain if spec.format == "plain" else lambda p: _read_csv(p, spec.column)
    values, lines = reader(spec.path)
    v = np.asarray(values, dtype=float)
    if spec.transform == "log-returns":
        bad = np.flatnonzero(v <= 0)
        if bad.size:
            ln = lines[bad[0]]
            raise SeriesFormatError(f"line {ln}: non-positive value {float(v[bad[0]])!r} under log-returns", ln)
        if v.size < 2:
            raise SeriesFormatError("log-returns needs at least two values", lines[-1] if lines else 0)
        return np.diff(np.log(v))
    if spec.transform == "cumsum":
        return np.cumsum(v)
    return v


def fmt(x) -> str:
    """Round-trip representation with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def atomic_write(path, text: str) -> None:
    """Write UTF-8 text with LF endings via a sibling temp file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    lines = [",".join(header)]
    lines += [",".join(c if isinstance(c, str) else fmt(c) for c in row) for row in rows]
    atomic_write(path, "\n".join(lines) + "\n")


def write_plain(path, values) -> None:
    atomic_write(path, "".join(fmt(v) + "\n" for v in values))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, record: dict) -> None:
    # json emits shortest round-trip reprs, which is exact for doubles
    atomic_write(path, json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n")
