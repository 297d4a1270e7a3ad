"""Simplex-wise filtration order and construction of coboundary column lists."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels as K
from ._parallel import run_chunks
from .metric_io import DistanceInput
from .simplex_codec import BinomialTable, SimplexEntry

__all__ = [
    "ColumnList",
    "filtration_key",
    "filtration_compare",
    "coboundary_order",
    "all_simplices",
    "build_reduction_columns",
    "metric_tuple",
]


def filtration_key(s: SimplexEntry) -> tuple[float, int, int]:
    """Sort key: diameter ascending, then dimension ascending, then index descending."""
    return (s.diam, s.dim, -s.cidx)


def filtration_compare(a: SimplexEntry, b: SimplexEntry) -> int:
    """-1 if ``a`` enters the filtration before ``b``, 1 if after, 0 if identical."""
    ka, kb = filtration_key(a), filtration_key(b)
    return (ka > kb) - (ka < kb)


def coboundary_order(cidx: np.ndarray, diam: np.ndarray) -> np.ndarray:
    """Permutation sorting by diameter descending, then index ascending."""
    return np.lexsort((cidx, -diam))


@dataclass(frozen=True, eq=False)
class ColumnList:
    """Same-dimension simplices in coboundary order (reverse filtration)."""

    dim: int
    cidx: np.ndarray
    diam: np.ndarray

    def __len__(self) -> int:
        return self.cidx.shape[0]

    def __iter__(self) -> Iterator[SimplexEntry]:
        for c, d in zip(self.cidx.tolist(), self.diam.tolist()):
            yield SimplexEntry(c, self.dim, d)

    def __getitem__(self, i: int) -> SimplexEntry:
        return SimplexEntry(int(self.cidx[i]), self.dim, float(self.diam[i]))

    def subset(self, mask: np.ndarray) -> "ColumnList":
        return ColumnList(self.dim, self.cidx[mask], self.diam[mask])

    @classmethod
    def from_arrays(cls, dim: int, cidx, diam) -> "ColumnList":
        cidx = np.asarray(cidx, dtype=np.int64)
        diam = np.asarray(diam, dtype=np.float64)
        order = coboundary_order(cidx, diam)
        return cls(dim, np.ascontiguousarray(cidx[order]), np.ascontiguousarray(diam[order]))


_DUMMY_I = np.zeros(1, dtype=np.int64)
_DUMMY_F = np.zeros(1, dtype=np.float64)
_DUMMY_M = np.zeros((1, 1), dtype=np.float64)


def metric_tuple(D: DistanceInput) -> tuple:
    """Kernel view of the metric."""
    if D.is_dense:
        return (True, D.matrix, _DUMMY_I, _DUMMY_I, _DUMMY_F)
    return (False, _DUMMY_M, D.indptr, D.indices, D.values)


def _edges(D: DistanceInput, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    if D.is_dense:
        keep = np.flatnonzero(D.tri <= threshold)
        return keep.astype(np.int64), D.tri[keep]
    rows = np.repeat(np.arange(D.n, dtype=np.int64), np.diff(D.indptr))
    keep = (rows > D.indices) & (D.values <= threshold)
    i, j = rows[keep], D.indices[keep]
    return i * (i - 1) // 2 + j, D.values[keep]


def all_simplices(D: DistanceInput, dim: int, threshold: float, binom: np.ndarray,
                  workers: int = 1, prev: tuple[np.ndarray, np.ndarray] | None = None
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Every ``dim``-simplex of diameter ``<= threshold`` as unsorted ``(cidx, diam)``.

    Dense input enumerates all indices and filters. Sparse input grows the
    ``dim``-simplices from ``prev``, the ``(dim-1)``-simplices, through the
    neighbor lists.
    """
    n = D.n
    if dim == 0:
        return np.arange(n, dtype=np.int64), np.zeros(n)
    if dim == 1:
        return _edges(D, threshold)
    M = metric_tuple(D)
    if D.is_dense:
        total = math.comb(n, dim + 1)
        idx = np.arange(total, dtype=np.int64)
        diam = np.empty(total)
        run_chunks(total, workers, lambda a, b: K.diameters_chunk(
            idx, a, b, dim, n, binom, M, diam))
        keep = diam <= threshold
        return idx[keep], diam[keep]
    if prev is None:
        prev = all_simplices(D, dim - 1, threshold, binom, workers)
    p_idx, p_diam = (np.ascontiguousarray(a) for a in prev)
    counts = np.zeros(p_idx.shape[0], dtype=np.int64)
    run_chunks(p_idx.shape[0], workers, lambda a, b: K.expand_count(
        p_idx, p_diam, a, b, dim - 1, n, binom, M, threshold, counts))
    offsets = np.zeros_like(counts)
    np.cumsum(counts[:-1], out=offsets[1:])
    total = int(counts.sum())
    out_idx = np.empty(total, dtype=np.int64)
    out_diam = np.empty(total)
    run_chunks(p_idx.shape[0], workers, lambda a, b: K.expand_write(
        p_idx, p_diam, a, b, dim - 1, n, binom, M, threshold, offsets, out_idx, out_diam))
    return out_idx, out_diam


def build_reduction_columns(D: DistanceInput, dim: int, threshold: float,
                            cleared: Iterable[int] | np.ndarray | None = None,
                            workers: int = 1, binom: np.ndarray | None = None,
                            simplices: tuple[np.ndarray, np.ndarray] | None = None
                            ) -> ColumnList:
    """Coboundary columns of dimension ``dim`` in reduction order, minus cleared ones.

    Parameters
    ----------
    threshold : float
        Simplices with larger diameter are dropped. Must be finite or ``inf``.
    cleared : iterable of int, optional
        Indices known to pair as births in the previous dimension.
    simplices : tuple of arrays, optional
        Precomputed output of :func:`all_simplices`.
    """
    if binom is None:
        binom = BinomialTable(D.n, dim + 2).array
    if simplices is None:
        simplices = all_simplices(D, dim, threshold, binom, workers)
    idx, diam = simplices
    keep = diam <= threshold
    if cleared is not None:
        cl = np.fromiter(cleared, dtype=np.int64) if not isinstance(cleared, np.ndarray) \
            else cleared.astype(np.int64)
        if cl.size:
            keep &= ~np.isin(idx, cl)
    return ColumnList.from_arrays(dim, idx[keep], diam[keep])
