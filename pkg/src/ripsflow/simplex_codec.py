"""Combinatorial number system encoding of simplices.

A ``p``-simplex with vertices ``v_p > ... > v_0`` has index
``sum_i C(v_i, i + 1)``. These functions are the readable reference versions;
the engine uses compiled equivalents in :mod:`ripsflow._kernels` that are
tested against them.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import CapacityError, InvalidIndexError, InvalidSimplexError
from .metric_io import DistanceInput

__all__ = [
    "INDEX_LIMIT",
    "BinomialTable",
    "SimplexEntry",
    "cidx_encode",
    "cidx_decode",
    "enumerate_cofacets_dense",
    "enumerate_cofacets_sparse",
    "enumerate_facets",
    "simplex_diameter",
    "check_capacity",
]

# Largest index representable in the signed 64-bit integers used by numpy and numba.
INDEX_LIMIT = 2**63 - 1


class SimplexEntry(NamedTuple):
    """A simplex given by its combinatorial index, with dimension and diameter attached."""

    cidx: int
    dim: int
    diam: float


class BinomialTable:
    """Exact binomial coefficients ``C(n, k)`` for ``n <= n_max`` and ``k <= k_max``.

    Raises
    ------
    CapacityError
        If any entry exceeds :data:`INDEX_LIMIT`.
    """

    def __init__(self, n_max: int, k_max: int):
        if n_max < 0 or k_max < 0:
            raise ValueError("table bounds must be non-negative")
        self.n_max = n_max
        self.k_max = k_max
        cols: list[list[int]] = [[1] * (n_max + 1)]
        for k in range(1, k_max + 1):
            prev = cols[-1]
            col = [0] * (n_max + 1)
            for n in range(1, n_max + 1):
                col[n] = col[n - 1] + prev[n - 1]
            if col[n_max] > INDEX_LIMIT:
                raise CapacityError(
                    f"C({n_max}, {k}) = {col[n_max]} exceeds the 64-bit index width")
            cols.append(col)
        # cols[k][n] == C(n, k); columns are non-decreasing in n.
        self._cols = cols
        self.array = np.array(cols, dtype=np.int64).T.copy()

    def __call__(self, n: int, k: int) -> int:
        if k < 0 or n < 0 or k > n:
            return 0
        return self._cols[k][n]

    def column(self, k: int) -> list[int]:
        return self._cols[k]


def check_capacity(n: int, max_cofacet_dim: int) -> None:
    """Fail unless every index of a ``max_cofacet_dim``-simplex on ``n`` points fits."""
    BinomialTable(n, max_cofacet_dim + 1)


def cidx_encode(vertices: Sequence[int], tbl: BinomialTable) -> int:
    """Index of the simplex with strictly decreasing ``vertices``."""
    verts = tuple(int(v) for v in vertices)
    d = len(verts) - 1
    if d < 0:
        raise InvalidSimplexError("a simplex needs at least one vertex")
    if d + 1 > tbl.k_max:
        raise InvalidSimplexError(f"dimension {d} exceeds the binomial table")
    if verts[-1] < 0 or verts[0] >= tbl.n_max:
        raise InvalidSimplexError(f"vertices {verts} out of range [0, {tbl.n_max})")
    total = 0
    for pos, v in enumerate(verts):
        if pos and v >= verts[pos - 1]:
            raise InvalidSimplexError(f"vertices {verts} are not strictly decreasing")
        total += tbl(v, d - pos + 1)
    return total


def cidx_decode(index: int, dim: int, tbl: BinomialTable) -> tuple[int, ...]:
    """Strictly decreasing vertices of the ``dim``-simplex with this index."""
    if dim < 0 or dim + 1 > tbl.k_max:
        raise InvalidIndexError(f"dimension {dim} outside the binomial table")
    if index < 0 or index >= tbl(tbl.n_max, dim + 1):
        raise InvalidIndexError(f"index {index} out of range for dimension {dim}")
    verts = []
    hi = tbl.n_max
    for k in range(dim + 1, 0, -1):
        col = tbl.column(k)
        # Largest v < hi with C(v, k) <= index.
        v = bisect_right(col, index, 0, hi) - 1
        verts.append(v)
        index -= col[v]
        hi = v
    return tuple(verts)


def simplex_diameter(vertices: Sequence[int], D: DistanceInput) -> float:
    """Largest pairwise distance among ``vertices``; 0 for a single vertex."""
    best = 0.0
    verts = list(vertices)
    for a in range(len(verts)):
        for b in range(a):
            best = max(best, D.dist(verts[a], verts[b]))
    return best


def enumerate_cofacets_dense(s: SimplexEntry, n: int, D: DistanceInput,
                             tbl: BinomialTable | None = None) -> Iterator[SimplexEntry]:
    """Cofacets of ``s`` in strictly decreasing index order.

    Each index is produced from running sums of the binomials above and below
    the insertion point, so no cofacet is re-encoded from scratch.
    """
    k = s.dim + 1
    if tbl is None:
        tbl = BinomialTable(n, k + 1)
    verts = cidx_decode(s.cidx, s.dim, tbl)
    idx_below = s.cidx
    idx_above = 0
    pos = 0
    for v in range(n - 1, -1, -1):
        if pos < len(verts) and verts[pos] == v:
            idx_below -= tbl(v, k)
            idx_above += tbl(v, k + 1)
            k -= 1
            pos += 1
            continue
        diam = s.diam
        for u in verts:
            diam = max(diam, D.dist(v, u))
        yield SimplexEntry(idx_above + tbl(v, k + 1) + idx_below, s.dim + 1, diam)


def enumerate_cofacets_sparse(s: SimplexEntry, D: DistanceInput,
                              tbl: BinomialTable | None = None) -> Iterator[SimplexEntry]:
    """Cofacets of ``s`` whose new vertex is a neighbor of every vertex of ``s``.

    Walks the neighbors of one vertex downward and advances a pointer per other
    vertex, stopping as soon as some vertex has no neighbor left at or below
    the candidate.
    """
    if tbl is None:
        tbl = BinomialTable(D.n, s.dim + 2)
    verts = cidx_decode(s.cidx, s.dim, tbl)
    lists = [D.neighbors(v) for v in verts]
    base = min(range(len(verts)), key=lambda a: (len(lists[a][0]), a))
    ptr = [len(lst[0]) - 1 for lst in lists]
    base_idx, base_val = lists[base]
    for bpos in range(len(base_idx) - 1, -1, -1):
        cand = int(base_idx[bpos])
        diam = max(s.diam, float(base_val[bpos]))
        common = True
        for a, (idx, val) in enumerate(lists):
            if a == base:
                continue
            while ptr[a] >= 0 and idx[ptr[a]] > cand:
                ptr[a] -= 1
            if ptr[a] < 0:
                return
            if idx[ptr[a]] != cand:
                common = False
                break
            diam = max(diam, float(val[ptr[a]]))
        if not common or cand in verts:
            continue
        new = sorted(verts + (cand,), reverse=True)
        yield SimplexEntry(cidx_encode(new, tbl), s.dim + 1, diam)


def enumerate_facets(t: SimplexEntry, D: DistanceInput,
                     tbl: BinomialTable | None = None) -> Iterator[SimplexEntry]:
    """Facets of ``t`` in strictly increasing index order.

    Vertices are removed from largest to smallest. Removing ``v_j`` gives
    ``above_j + below_j`` with ``above`` summing ``C(v_i, i)`` for ``i > j`` and
    ``below`` summing ``C(v_i, i + 1)`` for ``i < j``; both are updated in O(1).
    """
    d = t.dim
    if d < 1:
        return
    if tbl is None:
        tbl = BinomialTable(D.n, d + 1)
    verts = cidx_decode(t.cidx, d, tbl)
    # verts[pos] is v_{d - pos}.
    below = t.cidx - tbl(verts[0], d + 1)
    above = 0
    for pos in range(d + 1):
        j = d - pos
        rest = verts[:pos] + verts[pos + 1:]
        yield SimplexEntry(above + below, d - 1, simplex_diameter(rest, D))
        if j > 0:
            above += tbl(verts[pos], j)
            below -= tbl(verts[pos + 1], j)
