"""CSV ingestion, delimited outputs, and run manifests.

Input CSVs must be comma-separated with a header row, '.' decimals, UTF-8,
and no missing values in the selected columns.  All writers use fixed
formatting so identical runs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
import pandas as pd

from . import __version__
from .utils import as_series

__all__ = [
    "load_series",
    "input_digest",
    "write_series_csv",
    "write_curve_csv",
    "RunManifest",
    "write_manifest",
]

TRANSFORMS = ("none", "log", "log_ratio")


def _column(frame: pd.DataFrame, name: str, path: str) -> np.ndarray:
    if name not in frame.columns:
        available = ", ".join(map(str, frame.columns))
        raise ValueError(f"column {name!r} not found in {path}; available columns: {available}")
    values = pd.to_numeric(frame[name], errors="coerce").to_numpy(dtype=float)
    if np.isnan(values).any():
        bad = int(np.isnan(values).sum())
        raise ValueError(f"column {name!r} in {path} has {bad} missing/non-numeric values")
    return values


def load_series(
    path: str,
    column: str | None = None,
    transform: str = "none",
    ratio: tuple[str, str] | None = None,
) -> np.ndarray:
    """Load one numeric series from a CSV file.

    ``transform`` is "none", "log" (requires strictly positive values), or
    "log_ratio", which takes ``ratio = (numerator, denominator)`` column
    names and returns log(numerator / denominator).
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"transform must be one of {TRANSFORMS}, got {transform!r}")
    frame = pd.read_csv(path, float_precision="round_trip")
    if frame.empty:
        raise ValueError(f"{path} contains no rows")
    if transform == "log_ratio":
        if ratio is None:
            raise ValueError("log_ratio transform needs numerator and denominator columns")
        num = _column(frame, ratio[0], path)
        den = _column(frame, ratio[1], path)
        if np.any(num <= 0) or np.any(den <= 0):
            raise ValueError("log_ratio requires strictly positive numerator and denominator")
        values = np.log(num / den)
    else:
        if column is None:
            raise ValueError("a --column name is required")
        values = _column(frame, column, path)
        if transform == "log":
            if np.any(values <= 0):
                raise ValueError(f"log transform requires strictly positive values in {column!r}")
            values = np.log(values)
    return as_series(values)


def input_digest(path: str) -> str:
    """SHA-256 digest of the raw input bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _format(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_series_csv(values: np.ndarray, destination=None, column: str = "y") -> str | None:
    """Write a series as a two-column CSV (index t from 1, values at full precision).

    ``destination`` is a path, or None to write to stdout.
    """
    lines = [f"t,{column}"]
    lines.extend(f"{t + 1},{_format(v)}" for t, v in enumerate(np.asarray(values, dtype=float)))
    text = "\n".join(lines) + "\n"
    if destination is None:
        sys.stdout.write(text)
        return None
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return destination


def write_curve_csv(path: str, report) -> str:
    """Write an ``McReport`` as a delta/c/frequency/se/overlay table."""
    lines = [",".join(report.CSV_COLUMNS)]
    for row in report.rows():
        lines.append(",".join(_format(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run byte-for-byte on one platform."""

    command: str
    config: dict
    seed: int | None
    timestamp: str
    version: str
    input_digest: str | None = None
    wall_time_seconds: float | None = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "version": self.version,
            "numpy_version": np.__version__,
            "input_digest": self.input_digest,
            "wall_time_seconds": self.wall_time_seconds,
        }


def write_manifest(
    path: str,
    command: str,
    config: dict,
    seed: int | None = None,
    digest: str | None = None,
    wall_time_seconds: float | None = None,
) -> str:
    """Write a JSON run manifest next to a command's outputs."""
    manifest = RunManifest(
        command=command,
        config=config,
        seed=seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=__version__,
        input_digest=digest,
        wall_time_seconds=wall_time_seconds,
    )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
