"""Implicit Vietoris-Rips persistence over Z2.

Dimension 0 uses union-find. Each higher dimension builds its cleared columns,
pairs the apparent ones with a local test, and reduces the rest as a
cohomology submatrix with the emergent shortcut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from ._parallel import run_chunks
from .diagram import PersistenceDiagram
from .errors import NotSupportedError
from .filtration import ColumnList, all_simplices, build_reduction_columns, metric_tuple
from .metric_io import DistanceInput, enclosing_radius
from .simplex_codec import BinomialTable, SimplexEntry, check_capacity

__all__ = [
    "VRConfig",
    "PairStore",
    "DimensionStats",
    "PersistenceResult",
    "KIND_REDUCED",
    "KIND_EMERGENT",
    "KIND_APPARENT",
    "zero_dim_persistence",
    "find_apparent_pairs",
    "reduce_submatrix",
    "reduce_column_oblivious",
    "vr_barcode",
]

KIND_REDUCED = 0
KIND_EMERGENT = 1
KIND_APPARENT = 2

MODES = {"oblivious": False, "vmatrix": True, "reduction-matrix": True}


@dataclass(frozen=True)
class VRConfig:
    """Options for :func:`vr_barcode`.

    ``apparent`` and ``emergent`` switch the two shortcuts off for
    instrumentation; results do not depend on them.
    """

    maxdim: int = 1
    threshold: float | None = None
    mode: str = "oblivious"
    include_zero: bool = False
    workers: int = 1
    apparent: bool = True
    emergent: bool = True


@dataclass
class PairStore:
    """Pairs found so far in one dimension.

    ``apparent_*`` arrays are sorted by cofacet index and stay fixed during the
    submatrix reduction. ``overflow`` maps a cofacet index to its column
    ``(cidx, diam)`` for pairs found by the reduction.
    """

    dim: int
    apparent_cofacet: np.ndarray
    apparent_facet: np.ndarray
    apparent_diam: np.ndarray
    overflow: dict[int, tuple[int, float]] = field(default_factory=dict)

    @classmethod
    def empty(cls, dim: int) -> "PairStore":
        return cls(dim, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0))

    def lookup(self, cofacet: int) -> SimplexEntry | None:
        """Column paired with row ``cofacet``; overflow is consulted first."""
        hit = self.overflow.get(int(cofacet))
        if hit is not None:
            return SimplexEntry(hit[0], self.dim, hit[1])
        pos = int(np.searchsorted(self.apparent_cofacet, cofacet))
        if pos < self.apparent_cofacet.shape[0] and self.apparent_cofacet[pos] == cofacet:
            return SimplexEntry(int(self.apparent_facet[pos]), self.dim,
                                float(self.apparent_diam[pos]))
        return None

    def known_pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All pairs as arrays sorted by cofacet: ``(cofacet, facet, facet_diam)``."""
        cof = np.concatenate([self.apparent_cofacet,
                              np.fromiter(self.overflow.keys(), np.int64, len(self.overflow))])
        fac = np.concatenate([self.apparent_facet,
                              np.array([v[0] for v in self.overflow.values()], np.int64)])
        dia = np.concatenate([self.apparent_diam,
                              np.array([v[1] for v in self.overflow.values()], np.float64)])
        order = np.argsort(cof, kind="stable")
        return cof[order], fac[order], dia[order]


@dataclass
class DimensionStats:
    dim: int
    columns: int = 0
    cleared: int = 0
    apparent: int = 0
    emergent: int = 0
    reduced: int = 0
    essential: int = 0
    additions: int = 0


@dataclass
class PersistenceResult:
    """Barcodes of dimensions ``0..maxdim`` plus pairing details.

    ``pairs[p]`` has rows ``(birth cidx, death cidx)`` for every pair in
    dimension ``p`` including zero-length ones, with death ``-1`` for infinite
    bars. ``kinds[p]`` marks how each pair was found.
    """

    diagrams: list[PersistenceDiagram]
    pairs: list[np.ndarray]
    pair_diams: list[np.ndarray]
    kinds: list[np.ndarray]
    stats: list[DimensionStats]
    threshold: float

    def __getitem__(self, dim: int) -> PersistenceDiagram:
        return self.diagrams[dim]


def _diagram(dim: int, births: np.ndarray, deaths: np.ndarray, include_zero: bool
             ) -> PersistenceDiagram:
    finite = deaths != np.inf
    fb, fd = births[finite], deaths[finite]
    if not include_zero:
        pos = fd > fb
        fb, fd = fb[pos], fd[pos]
    return PersistenceDiagram(np.column_stack([fb, fd]), births[~finite], dim,
                              allow_diagonal=include_zero)


def _resolve_threshold(D: DistanceInput, threshold: float | None) -> float:
    if threshold is None:
        if not D.is_dense:
            raise NotSupportedError("sparse input requires an explicit threshold")
        return enclosing_radius(D)
    if threshold < 0 or math.isnan(threshold):
        raise ValueError("threshold must be non-negative")
    return float(threshold)


def _zero_dim(D: DistanceInput, t: float, binom: np.ndarray):
    edges = all_simplices(D, 1, t, binom)
    idx, diam = edges
    # filtration order: diameter ascending, index descending
    order = np.lexsort((-idx, diam))
    idx, diam = np.ascontiguousarray(idx[order]), np.ascontiguousarray(diam[order])
    birth_v, death_pos, is_tree = K.union_find_edges(D.n, idx, diam, binom)
    alive = np.ones(D.n, dtype=bool)
    alive[birth_v] = False
    essential = np.flatnonzero(alive)[::-1]
    births = np.zeros(birth_v.shape[0] + essential.shape[0])
    deaths = np.concatenate([diam[death_pos], np.full(essential.shape[0], np.inf)])
    pairs = np.column_stack([np.concatenate([birth_v, essential]),
                             np.concatenate([idx[death_pos], np.full(essential.shape[0], -1)])])
    complementary = ColumnList.from_arrays(1, idx[~is_tree], diam[~is_tree])
    return births, deaths, pairs.astype(np.int64), complementary, idx[is_tree], (idx, diam)


def zero_dim_persistence(D: DistanceInput, threshold: float | None = None,
                         include_zero: bool = False
                         ) -> tuple[PersistenceDiagram, ColumnList]:
    """Dimension-0 barcode by union-find and the cycle-closing edges.

    Returns
    -------
    diagram : PersistenceDiagram
        One finite bar per merge and one infinite bar per final component.
    complementary : ColumnList
        Edges that closed a cycle, in coboundary order. They are exactly the
        dimension-1 columns left after clearing.
    """
    t = _resolve_threshold(D, threshold)
    binom = BinomialTable(D.n, 3).array
    births, deaths, _, comp, _, _ = _zero_dim(D, t, binom)
    return _diagram(0, births, deaths, include_zero), comp


def _apparent_scan(cols: ColumnList, D: DistanceInput, t: float, binom: np.ndarray,
                   workers: int) -> np.ndarray:
    out = np.empty(len(cols), dtype=np.int64)
    M = metric_tuple(D)
    run_chunks(len(cols), workers, lambda a, b: K.apparent_chunk(
        cols.cidx, cols.diam, a, b, cols.dim, D.n, binom, M, t, out))
    return out


def find_apparent_pairs(cols: ColumnList, D: DistanceInput, threshold: float = math.inf,
                        workers: int = 1) -> tuple[PairStore, ColumnList]:
    """Pair every column with its oldest cofacet when each is the other's local extreme.

    Returns the store holding the apparent pairs and the remaining columns in
    their original order.
    """
    binom = BinomialTable(D.n, cols.dim + 2).array
    cof = _apparent_scan(cols, D, threshold, binom, workers)
    hit = cof >= 0
    order = np.argsort(cof[hit], kind="stable")
    store = PairStore(cols.dim, np.ascontiguousarray(cof[hit][order]),
                      np.ascontiguousarray(cols.cidx[hit][order]),
                      np.ascontiguousarray(cols.diam[hit][order]))
    return store, cols.subset(~hit)


def reduce_submatrix(cols: ColumnList, store: PairStore, D: DistanceInput,
                     threshold: float = math.inf, mode: str = "oblivious",
                     emergent: bool = True, binom: np.ndarray | None = None
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Reduce ``cols`` in order against ``store``; new pairs go to ``store.overflow``.

    Returns ``(pivot, pivot_diam, kind, additions)`` aligned with ``cols``.
    Pivot is -1 for columns that reduce to zero.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if binom is None:
        binom = BinomialTable(D.n, cols.dim + 2).array
    known_cof, known_fac, known_diam = store.known_pairs()
    pivot, pivot_diam, kind, additions = K.reduce_columns(
        cols.cidx, cols.diam, cols.dim, D.n, binom, metric_tuple(D), threshold,
        known_cof, known_fac, known_diam, MODES[mode], emergent)
    for c, s, d in zip(pivot.tolist(), cols.cidx.tolist(), cols.diam.tolist()):
        if c >= 0:
            store.overflow[c] = (s, d)
    return pivot, pivot_diam, kind, int(additions)


def reduce_column_oblivious(s: SimplexEntry, store: PairStore, D: DistanceInput,
                            threshold: float = math.inf, emergent: bool = True
                            ) -> SimplexEntry | None:
    """Reduce one column against the pairs in ``store`` by adding unreduced coboundaries.

    Returns the pivot cofacet, or ``None`` when the column reduces to zero.
    A found pair is registered in ``store``.
    """
    cols = ColumnList(s.dim, np.array([s.cidx], np.int64), np.array([s.diam]))
    pivot, pivot_diam, _, _ = reduce_submatrix(cols, store, D, threshold, "oblivious", emergent)
    if pivot[0] < 0:
        return None
    return SimplexEntry(int(pivot[0]), s.dim + 1, float(pivot_diam[0]))


def vr_barcode(D: DistanceInput, maxdim: int = 1, threshold: float | None = None,
               mode: str = "oblivious", include_zero: bool = False, workers: int = 1,
               apparent: bool = True, emergent: bool = True) -> PersistenceResult:
    """Persistence barcodes of the Rips filtration in dimensions ``0..maxdim``.

    Parameters
    ----------
    D : DistanceInput
    maxdim : int
    threshold : float, optional
        Largest diameter kept. Defaults to the enclosing radius for dense input;
        required for sparse input.
    mode : {"oblivious", "vmatrix"}
        Column additions use unreduced coboundaries or replay stored
        reduction-matrix columns. Both give identical barcodes.
    include_zero : bool
        Keep zero-length bars in the diagrams.
    workers : int
        Threads for the data-parallel stages. Output does not depend on it.

    Raises
    ------
    CapacityError
        If ``(maxdim+1)``-simplex indices on ``D.n`` points overflow 64 bits.
    """
    if maxdim < 0:
        raise ValueError("maxdim must be non-negative")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    check_capacity(D.n, maxdim + 1)
    t = _resolve_threshold(D, threshold)
    binom = BinomialTable(D.n, maxdim + 2).array
    workers = max(1, int(workers))

    births, deaths, pairs0, comp, tree_edges, edges = _zero_dim(D, t, binom)
    diagrams = [_diagram(0, births, deaths, include_zero)]
    pairs = [pairs0]
    pair_diams = [np.column_stack([births, deaths])]
    kinds = [np.full(pairs0.shape[0], KIND_REDUCED, np.int8)]
    stats = [DimensionStats(0, columns=D.n, reduced=int(np.sum(deaths != np.inf)),
                            essential=int(np.sum(deaths == np.inf)))]

    cleared = tree_edges
    simplices = edges
    for p in range(1, maxdim + 1):
        if p > 1:
            prev = simplices if not D.is_dense else None
            simplices = all_simplices(D, p, t, binom, workers, prev=prev)
        cols = build_reduction_columns(D, p, t, cleared, workers, binom, simplices)
        st = DimensionStats(p, columns=len(cols), cleared=int(cleared.shape[0]))
        if apparent:
            ap_cof = _apparent_scan(cols, D, t, binom, workers)
        else:
            ap_cof = np.full(len(cols), -1, np.int64)
        hit = ap_cof >= 0
        order = np.argsort(ap_cof[hit], kind="stable")
        store = PairStore(p, np.ascontiguousarray(ap_cof[hit][order]),
                          np.ascontiguousarray(cols.cidx[hit][order]),
                          np.ascontiguousarray(cols.diam[hit][order]))
        rest = cols.subset(~hit)
        pivot, pivot_diam, kind, additions = reduce_submatrix(
            rest, store, D, t, mode, emergent, binom)

        # merge back into column order
        col_pivot = np.full(len(cols), -1, np.int64)
        col_pdiam = np.full(len(cols), np.inf)
        col_kind = np.full(len(cols), KIND_APPARENT, np.int8)
        col_pivot[hit] = ap_cof[hit]
        col_pdiam[hit] = cols.diam[hit]
        col_pivot[~hit] = pivot
        col_pdiam[~hit] = pivot_diam
        col_kind[~hit] = kind

        pairs.append(np.column_stack([cols.cidx, col_pivot]))
        pair_diams.append(np.column_stack([cols.diam, col_pdiam]))
        kinds.append(col_kind)
        diagrams.append(_diagram(p, cols.diam, col_pdiam, include_zero))
        st.apparent = int(hit.sum())
        st.emergent = int(np.sum(kind == KIND_EMERGENT))
        st.reduced = int(np.sum((kind == KIND_REDUCED) & (pivot >= 0)))
        st.essential = int(np.sum(pivot < 0))
        st.additions = additions
        stats.append(st)
        cleared = col_pivot[col_pivot >= 0]

    return PersistenceResult(diagrams, pairs, pair_diams, kinds, stats, t)
