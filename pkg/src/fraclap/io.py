"""Serialization: fields to CSV and raw float64, series, verdicts, summaries.

All text output is deterministic: floats are written with repr (shortest
round-trip form), JSON keys are sorted, and nothing here stamps times or
hostnames.  Rerunning the same configuration must reproduce every CSV
byte for byte.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .grid import Field, GridSpec, ValidationError

RAW_DTYPE = "<f8"


def _fmt(v) -> str:
    return repr(float(v))


def field_to_csv(f: Field, path) -> Path:
    """Write one row per cell: coordinate column(s) then the value."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        if f.grid.dimension == 1:
            w.writerow(["x", "value"])
            for x, v in zip(f.grid.axis_coords(), f.values):
                w.writerow([_fmt(x), _fmt(v)])
        else:
            w.writerow(["x", "y", "value"])
            xx, yy = f.grid.coords()
            for x, y, v in zip(xx.ravel(), yy.ravel(), f.values.ravel()):
                w.writerow([_fmt(x), _fmt(y), _fmt(v)])
    return path


def field_to_raw(f: Field, path) -> Path:
    """Raw little-endian float64 in C order, plus a JSON sidecar at
    `<path>.json` recording the grid and any operator metadata."""
    path = Path(path)
    path.write_bytes(np.ascontiguousarray(f.values, dtype=RAW_DTYPE).tobytes())
    sidecar = {
        "grid": {
            "dimension": f.grid.dimension,
            "n": f.grid.n,
            "half_length": f.grid.half_length,
        },
        "dtype": RAW_DTYPE,
        "order": "C",
        "meta": f.meta or {},
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
    return path


def field_from_raw(path) -> Field:
    path = Path(path)
    sidecar = json.loads(Path(str(path) + ".json").read_text())
    g = sidecar["grid"]
    grid = GridSpec(dimension=g["dimension"], n=g["n"], half_length=g["half_length"])
    values = np.frombuffer(path.read_bytes(), dtype=sidecar.get("dtype", RAW_DTYPE)).astype(float)
    if values.size != grid.size:
        raise ValidationError(
            f"raw field {path} holds {values.size} samples, sidecar grid wants {grid.size}"
        )
    meta = sidecar.get("meta") or None
    return Field(grid, values.reshape(grid.shape), meta)


def table_from_csv(path) -> tuple:
    """Read a two-column (coordinate, value) table; header row optional."""
    xs, vs = [], []
    with Path(path).open(newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                x, v = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if xs:
                    raise ValidationError(f"malformed table row: {row}")
                continue  # header
            xs.append(x)
            vs.append(v)
    if len(xs) < 2:
        raise ValidationError(f"table {path} needs at least two numeric rows")
    order = np.argsort(xs)
    return np.asarray(xs)[order], np.asarray(vs)[order]


def series_to_csv(times: np.ndarray, series: dict, path) -> Path:
    """One row per accepted step: t followed by each series column."""
    path = Path(path)
    keys = list(series.keys())
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + keys)
        for i, t in enumerate(times):
            w.writerow([_fmt(t)] + [_fmt(series[k][i]) for k in keys])
    return path


def curve_to_csv(columns: dict, path) -> Path:
    """Named columns of equal length, written in the given order."""
    path = Path(path)
    keys = list(columns.keys())
    cols = [np.asarray(columns[k]).ravel() for k in keys]
    if len(set(c.size for c in cols)) != 1:
        raise ValidationError("curve columns must have equal length")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(keys)
        for i in range(cols[0].size):
            w.writerow([_fmt(c[i]) for c in cols])
    return path


def json_dump(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n")
    return path


def json_load(path):
    return json.loads(Path(path).read_text())


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def verdict_block(claim: str, fitted, target, tolerance, passed: bool) -> dict:
    """The unit of verification output; `target` may be a number or a
    two-element band [lo, hi] (tolerance None in the band case)."""
    if isinstance(target, (list, tuple)):
        target = [float(target[0]), float(target[1])]
    elif target is not None:
        target = float(target)
    return {
        "claim": str(claim),
        "fitted": None if fitted is None else float(fitted),
        "target": target,
        "tolerance": None if tolerance is None else float(tolerance),
        "pass": bool(passed),
    }


def band_verdict(claim: str, fitted: float, lo: float, hi: float) -> dict:
    return verdict_block(claim, fitted, [lo, hi], None, lo <= fitted <= hi)


def tolerance_verdict(claim: str, fitted: float, target: float, tol: float) -> dict:
    return verdict_block(claim, fitted, target, tol, abs(fitted - target) <= tol)
