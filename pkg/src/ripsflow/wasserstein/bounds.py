"""Cheap lower bounds on W1 and the closed-form approximation factors."""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from ..diagram import diagonal_distance
from ..errors import DomainError
from ._points import as_points

__all__ = [
    "rwmd_lower_bound",
    "wcd_lower_bound",
    "spanner_stretch",
    "condensation_epsilon",
    "theoretical_error_bound",
]


def _one_sided(src: np.ndarray, dst: np.ndarray) -> float:
    """Sum over ``src`` of the cheaper of its nearest ``dst`` point and the diagonal."""
    if src.shape[0] == 0:
        return 0.0
    diag = diagonal_distance(src)
    if dst.shape[0] == 0:
        return math.fsum(diag.tolist())
    nn, _ = cKDTree(dst).query(src, k=1)
    return math.fsum(np.minimum(nn, diag).tolist())


def rwmd_lower_bound(A, B) -> float:
    """Relaxed transport lower bound ``max(L_A, L_B)``.

    ``L_A`` lets every point of ``A`` move to its nearest point of ``B`` or to
    the diagonal, ignoring capacities; ``L_B`` is the mirror image. Repeated
    points count with multiplicity.
    """
    a, b = as_points(A), as_points(B)
    return max(_one_sided(a, b), _one_sided(b, a))


def wcd_lower_bound(A, B) -> float:
    """Half the distance between the centroids of ``A + proj(B)`` and ``B + proj(A)``.

    Both augmented sets hold ``|A| + |B|`` unit masses, so the centroid
    distance bounds the per-unit transport cost from below.
    """
    a, b = as_points(A), as_points(B)
    if a.shape[0] + b.shape[0] == 0:
        return 0.0
    pa = np.repeat(a.mean(axis=1, keepdims=True), 2, axis=1)
    pb = np.repeat(b.mean(axis=1, keepdims=True), 2, axis=1)
    left = np.vstack([a, pb]).mean(axis=0)
    right = np.vstack([b, pa]).mean(axis=0)
    return 0.5 * float(np.hypot(*(left - right)))


def spanner_stretch(s: float) -> float:
    """Stretch ``1 + 4/s + 4/(s-2)`` of the well-separated pair spanner."""
    if s <= 2:
        raise DomainError("separation s must exceed 2")
    return 1.0 + 4.0 / s + 4.0 / (s - 2.0)


def condensation_epsilon(s: float) -> float:
    """Relative error of the lattice condensation: ``8/(s-4)`` for ``s >= 12``, else 1."""
    if s <= 2:
        raise DomainError("separation s must exceed 2")
    return 8.0 / (s - 4.0) if s >= 12 else 1.0


def theoretical_error_bound(s: float) -> float:
    """Combined relative error ``stretch * (1 + eps_cond) - 1``.

    Tends to 0 as ``s`` grows; for ``2 < s < 12`` the loose condensation
    error 1 applies.
    """
    if math.isinf(s):
        return 0.0
    return spanner_stretch(s) * (1.0 + condensation_epsilon(s)) - 1.0
