"""Metric input: parsing, distance storage, enclosing radius and thresholding.

Dense storage is the flat lower triangle where the entry for ``i > j`` sits at
``i * (i - 1) // 2 + j``. That offset coincides with the combinatorial index of
the edge ``(i, j)``, so edge enumeration needs no extra bookkeeping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputParseError, NotSupportedError

__all__ = [
    "DistanceInput",
    "load_metric_input",
    "load_metric_file",
    "enclosing_radius",
    "sparsify_by_threshold",
    "write_lower_distance",
    "FORMATS",
]

FORMATS = ("lower-distance", "point-cloud", "sparse")

_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True, eq=False)
class DistanceInput:
    """Distances between ``n`` points, stored dense or sparse.

    Parameters
    ----------
    n : int
        Number of points.
    tri : ndarray or None
        Dense lower triangle of length ``n(n-1)/2``.
    indptr, indices, values : ndarray or None
        Symmetric CSR neighbor lists, sorted by neighbor within each row.
        Pairs without an entry are at infinite distance.
    """

    n: int
    tri: np.ndarray | None = None
    indptr: np.ndarray | None = None
    indices: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.tri is None and self.indptr is None:
            raise ValueError("either dense or sparse storage is required")

    @property
    def is_dense(self) -> bool:
        return self.tri is not None

    # construction -------------------------------------------------------

    @classmethod
    def from_matrix(cls, mat) -> "DistanceInput":
        """Dense input from a symmetric square matrix (lower triangle is read)."""
        mat = np.asarray(mat, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("distance matrix must be square")
        n = mat.shape[0]
        rows, cols = np.tril_indices(n, -1)
        tri = np.ascontiguousarray(mat[rows, cols])
        if np.any(tri < 0) or np.any(np.isnan(tri)):
            raise ValueError("distances must be non-negative")
        return cls(n=n, tri=tri)

    @classmethod
    def from_points(cls, points) -> "DistanceInput":
        """Dense Euclidean distances of a point cloud (one row per point)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        n = pts.shape[0]
        rows, cols = np.tril_indices(n, -1)
        diff = pts[rows] - pts[cols]
        tri = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        return cls(n=n, tri=tri)

    @classmethod
    def from_pairs(cls, n: int, i, j, d) -> "DistanceInput":
        """Sparse input from pair lists. Reverse entries are added; self pairs dropped.

        A pair listed twice keeps its smallest distance.
        """
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        d = np.asarray(d, dtype=np.float64)
        if np.any(d < 0) or np.any(np.isnan(d)):
            raise ValueError("distances must be non-negative")
        keep = i != j
        i, j, d = i[keep], j[keep], d[keep]
        src = np.concatenate([i, j])
        dst = np.concatenate([j, i])
        val = np.concatenate([d, d])
        order = np.lexsort((val, dst, src))
        src, dst, val = src[order], dst[order], val[order]
        first = np.ones(src.shape[0], dtype=bool)
        first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        src, dst, val = src[first], dst[first], val[first]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(n=n, indptr=indptr, indices=np.ascontiguousarray(dst),
                   values=np.ascontiguousarray(val))

    # access -------------------------------------------------------------

    def dist(self, i: int, j: int) -> float:
        """Distance between points ``i`` and ``j`` (``inf`` for missing sparse pairs)."""
        if i == j:
            return 0.0
        if i < j:
            i, j = j, i
        if self.tri is not None:
            return float(self.tri[i * (i - 1) // 2 + j])
        lo, hi = self.indptr[i], self.indptr[i + 1]
        k = lo + np.searchsorted(self.indices[lo:hi], j)
        if k < hi and self.indices[k] == j:
            return float(self.values[k])
        return float("inf")

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted neighbor indices of ``i`` and the matching distances."""
        if self.tri is not None:
            row = self.matrix[i]
            idx = np.flatnonzero(np.arange(self.n) != i)
            return idx, row[idx]
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Full square matrix; ``inf`` marks missing sparse pairs."""
        n = self.n
        if self.tri is not None:
            mat = np.zeros((n, n), dtype=np.float64)
            rows, cols = np.tril_indices(n, -1)
            mat[rows, cols] = self.tri
            mat[cols, rows] = self.tri
            return mat
        mat = np.full((n, n), np.inf)
        np.fill_diagonal(mat, 0.0)
        rows = np.repeat(np.arange(n), np.diff(self.indptr))
        mat[rows, self.indices] = self.values
        return mat


# parsing ----------------------------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _floats(line: str, lineno: int) -> list[float]:
    out = []
    for tok in _SPLIT.split(line.strip(" ,")):
        try:
            val = float(tok)
        except ValueError:
            raise InputParseError(f"non-numeric token {tok!r}", lineno) from None
        out.append(val)
    return out


def _parse_lower(text: str) -> DistanceInput:
    vals: list[float] = []
    row = 0
    for lineno, line in _data_lines(text):
        row += 1
        entries = _floats(line, lineno)
        if len(entries) != row:
            raise InputParseError(
                f"expected {row} distances on row {row}, found {len(entries)}", lineno)
        for v in entries:
            if not v >= 0 or v == float("inf"):
                raise InputParseError(f"invalid distance {v!r}", lineno)
        vals.extend(entries)
    return DistanceInput(n=row + 1, tri=np.asarray(vals, dtype=np.float64))


def _parse_points(text: str) -> DistanceInput:
    rows: list[list[float]] = []
    width = None
    for lineno, line in _data_lines(text):
        coords = _floats(line, lineno)
        if width is None:
            width = len(coords)
        elif len(coords) != width:
            raise InputParseError(
                f"expected {width} coordinates, found {len(coords)}", lineno)
        if not all(np.isfinite(coords)):
            raise InputParseError("coordinates must be finite", lineno)
        rows.append(coords)
    if not rows:
        raise InputParseError("point cloud is empty")
    return DistanceInput.from_points(np.asarray(rows))


def _parse_sparse(text: str) -> DistanceInput:
    ii, jj, dd = [], [], []
    for lineno, line in _data_lines(text):
        toks = _SPLIT.split(line.strip(" ,"))
        if len(toks) != 3:
            raise InputParseError(f"expected 'i j d', found {len(toks)} tokens", lineno)
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise InputParseError("point indices must be integers", lineno) from None
        d = _floats(toks[2], lineno)[0]
        if i < 0 or j < 0:
            raise InputParseError("point indices must be non-negative", lineno)
        if not d >= 0 or d == float("inf"):
            raise InputParseError(f"invalid distance {d!r}", lineno)
        ii.append(i)
        jj.append(j)
        dd.append(d)
    n = max(max(ii, default=-1), max(jj, default=-1)) + 1
    return DistanceInput.from_pairs(n, ii, jj, dd)


def load_metric_input(text: str | bytes, fmt: str = "lower-distance") -> DistanceInput:
    """Parse metric text.

    Parameters
    ----------
    text : str or bytes
        File contents. Lines starting with ``#`` are ignored.
    fmt : {"lower-distance", "point-cloud", "sparse"}

    Raises
    ------
    InputParseError
        On negative distances, ragged rows or non-numeric tokens, with the
        offending line number.
    """
    if isinstance(text, bytes):
        text = text.decode()
    if fmt == "lower-distance":
        return _parse_lower(text)
    if fmt == "point-cloud":
        return _parse_points(text)
    if fmt == "sparse":
        return _parse_sparse(text)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def load_metric_file(path, fmt: str = "lower-distance") -> DistanceInput:
    with open(path, "rb") as fh:
        return load_metric_input(fh.read(), fmt)


def write_lower_distance(D: DistanceInput) -> str:
    """Lower-distance text whose re-parse reproduces the values bit-for-bit."""
    if not D.is_dense:
        raise NotSupportedError("only dense input can be written as lower-distance")
    lines = []
    for i in range(1, D.n):
        start = i * (i - 1) // 2
        lines.append(",".join(repr(float(v)) for v in D.tri[start:start + i]))
    return "\n".join(lines) + ("\n" if lines else "")


# derived quantities -----------------------------------------------------


def enclosing_radius(D: DistanceInput) -> float:
    """Smallest over points of the largest distance from that point.

    Returns 0 when ``n < 2``. Sparse input is rejected because missing pairs
    are infinite and the radius would carry no information.
    """
    if not D.is_dense:
        raise NotSupportedError("enclosing radius needs dense input; pass an explicit threshold")
    if D.n < 2:
        return 0.0
    return float(D.matrix.max(axis=1).min())


def sparsify_by_threshold(D: DistanceInput, t: float) -> DistanceInput:
    """Sparse neighbor lists keeping exactly the pairs with ``d <= t``."""
    if t < 0:
        raise ValueError("threshold must be non-negative")
    if D.is_dense:
        rows, cols = np.tril_indices(D.n, -1)
        keep = D.tri <= t
        return DistanceInput.from_pairs(D.n, rows[keep], cols[keep], D.tri[keep])
    rows = np.repeat(np.arange(D.n), np.diff(D.indptr))
    keep = (D.values <= t) & (rows > D.indices)
    return DistanceInput.from_pairs(D.n, rows[keep], D.indices[keep], D.values[keep])
