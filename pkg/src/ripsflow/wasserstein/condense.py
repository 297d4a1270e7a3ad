"""Lattice condensation of a diagram pair.

Points snap to a lattice of pitch ``0.99 * delta`` and masses on the same side
merge. Each occupied lattice point then receives one small seeded shift, shared
by its A-side and B-side nodes, so that later pivots see no exact ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ._points import as_points, merge_duplicates
from .bounds import condensation_epsilon, rwmd_lower_bound

__all__ = ["CondensedPair", "delta_condense", "LATTICE_FACTOR", "DEFAULT_SEED"]

LATTICE_FACTOR = 0.99
PERTURBATION = 0.005
DEFAULT_SEED = 0


@dataclass(frozen=True, eq=False)
class CondensedPair:
    """Weighted A-side and B-side nodes after condensation.

    ``delta`` is 0 when the lower bound vanished and nothing was snapped; the
    nodes are then the distinct input points.
    """

    a_points: np.ndarray
    a_supply: np.ndarray
    b_points: np.ndarray
    b_supply: np.ndarray
    delta: float
    epsilon: float
    lower_bound: float


def delta_condense(A, B, s: float, seed: int | None = DEFAULT_SEED) -> CondensedPair:
    """Snap both diagrams to a common lattice and merge masses.

    Parameters
    ----------
    A, B : PersistenceDiagram or array_like, shape (k, 2)
    s : float
        Separation of the spanner built afterwards; fixes ``epsilon``.
    seed : int, optional
        Seed of the perturbation generator.

    Notes
    -----
    ``delta = 2 * epsilon * L / (sqrt(2) * (|A| + |B|))`` with ``L`` the
    relaxed lower bound and counts taken with multiplicity. Every point moves
    by at most ``delta / sqrt(2)``, so the total cost changes by at most
    ``epsilon * L``.
    """
    if s <= 2:
        raise DomainError("separation s must exceed 2")
    a, b = as_points(A), as_points(B)
    eps = condensation_epsilon(s)
    L = rwmd_lower_bound(a, b)
    if L == 0.0:
        ap, aw = merge_duplicates(a)
        bp, bw = merge_duplicates(b)
        return CondensedPair(ap, aw, bp, bw, 0.0, eps, 0.0)

    delta = 2.0 * eps * L / (np.sqrt(2.0) * (a.shape[0] + b.shape[0]))
    pitch = LATTICE_FACTOR * delta
    cells = np.rint(np.vstack([a, b]) / pitch).astype(np.int64)
    side = np.concatenate([np.zeros(a.shape[0], np.int64), np.ones(b.shape[0], np.int64)])

    # occupied lattice points in lexicographic order, and per-side masses
    lattice, cell_id = np.unique(cells, axis=0, return_inverse=True)
    cell_id = cell_id.reshape(-1)
    mass = np.zeros((lattice.shape[0], 2), dtype=np.int64)
    np.add.at(mass, (cell_id, side), 1)

    rng = np.random.default_rng(seed)
    shift = rng.uniform(-PERTURBATION * delta, PERTURBATION * delta, size=lattice.shape)
    pos = lattice * pitch + shift
    on_a = mass[:, 0] > 0
    on_b = mass[:, 1] > 0
    return CondensedPair(pos[on_a], mass[on_a, 0], pos[on_b], mass[on_b, 1],
                         float(delta), eps, L)
