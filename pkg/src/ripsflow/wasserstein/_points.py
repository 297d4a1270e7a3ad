"""Coercion of diagram-like inputs to finite point arrays."""

from __future__ import annotations

import numpy as np

from ..diagram import PersistenceDiagram


def as_points(x) -> np.ndarray:
    """Finite ``(birth, death)`` rows of a diagram or array; infinite bars are dropped."""
    if isinstance(x, PersistenceDiagram):
        return x.finite
    arr = np.asarray(x, dtype=np.float64).reshape(-1, 2)
    return arr[np.all(np.isfinite(arr), axis=1)]


def merge_duplicates(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows in lexicographic order with their multiplicities."""
    if pts.shape[0] == 0:
        return pts.reshape(0, 2), np.zeros(0, dtype=np.int64)
    uniq, counts = np.unique(pts, axis=0, return_counts=True)
    return uniq, counts.astype(np.int64)
