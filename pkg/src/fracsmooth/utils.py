"""Shared input validation helpers."""

from __future__ import annotations

import numpy as np


def as_series(y, min_length: int = 2) -> np.ndarray:
    """Coerce ``y`` to a 1-d float array and validate it as a time series.

    Raises ValueError for wrong dimensionality, too few observations, or
    non-finite entries.
    """
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"series needs at least {min_length} observations, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series contains non-finite values")
    return arr
