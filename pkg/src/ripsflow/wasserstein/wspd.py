"""Split tree, well-separated pair decomposition and the induced spanner."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

__all__ = ["SplitTree", "build_split_tree", "wspd_pairs", "WSPDSpanner", "build_wspd_spanner"]


@dataclass(frozen=True, eq=False)
class SplitTree:
    """Binary space partition of distinct planar points.

    Node ``k`` covers the points ``perm[start[k]:stop[k]]`` and stores their
    tight bounding box ``lo[k], hi[k]``, its children (``-1`` for a leaf) and a
    representative, the lexicographically smallest covered point. Node 0 is
    the root.
    """

    points: np.ndarray
    perm: np.ndarray
    start: np.ndarray
    stop: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    left: np.ndarray
    right: np.ndarray
    rep: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.start.shape[0]

    def members(self, node: int) -> np.ndarray:
        return self.perm[self.start[node]:self.stop[node]]

    def is_leaf(self, node: int) -> bool:
        return self.left[node] < 0


def build_split_tree(points) -> SplitTree:
    """Split each box at the midpoint of its longest edge until one point remains.

    Raises
    ------
    ValueError
        If two points coincide.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = pts.shape[0]
    if n == 0:
        raise ValueError("split tree needs at least one point")
    if np.unique(pts, axis=0).shape[0] != n:
        raise ValueError("split tree points must be distinct")
    perm = np.arange(n)
    start, stop, lo, hi, left, right = [], [], [], [], [], []
    # stack of (node id, parent slot to patch); nodes are numbered in preorder
    stack = [(0, n, -1, 0)]
    while stack:
        a, b, parent, slot = stack.pop()
        k = len(start)
        if parent >= 0:
            (left if slot == 0 else right)[parent] = k
        sub = pts[perm[a:b]]
        box_lo, box_hi = sub.min(axis=0), sub.max(axis=0)
        start.append(a)
        stop.append(b)
        lo.append(box_lo)
        hi.append(box_hi)
        left.append(-1)
        right.append(-1)
        if b - a == 1:
            continue
        axis = int(np.argmax(box_hi - box_lo))
        mid = 0.5 * (box_lo[axis] + box_hi[axis])
        low_side = sub[:, axis] <= mid
        idx = perm[a:b]
        perm[a:b] = np.concatenate([idx[low_side], idx[~low_side]])
        cut = a + int(low_side.sum())
        stack.append((cut, b, k, 1))
        stack.append((a, cut, k, 0))
    left_a = np.array(left, dtype=np.int64)
    right_a = np.array(right, dtype=np.int64)
    rep = np.empty(len(start), dtype=np.int64)
    for k in range(len(start) - 1, -1, -1):
        if left_a[k] < 0:
            rep[k] = perm[start[k]]
        else:
            r1, r2 = rep[left_a[k]], rep[right_a[k]]
            rep[k] = r1 if tuple(pts[r1]) <= tuple(pts[r2]) else r2
    return SplitTree(pts, perm, np.array(start), np.array(stop), np.array(lo),
                     np.array(hi), left_a, right_a, rep)


def _separated(tree: SplitTree, u: int, v: int, s: float) -> bool:
    cu = 0.5 * (tree.lo[u] + tree.hi[u])
    cv = 0.5 * (tree.lo[v] + tree.hi[v])
    r = 0.5 * max(float(np.hypot(*(tree.hi[u] - tree.lo[u]))),
                  float(np.hypot(*(tree.hi[v] - tree.lo[v]))))
    return float(np.hypot(*(cu - cv))) - 2.0 * r >= s * r


def _find_pairs(tree: SplitTree, u: int, v: int, s: float, sink) -> None:
    edge = tree.hi - tree.lo
    stack = [(u, v)]
    while stack:
        x, y = stack.pop()
        if _separated(tree, x, y, s):
            sink(x, y)
            continue
        if edge[x].max() < edge[y].max():
            x, y = y, x
        stack.append((tree.right[x], y))
        stack.append((tree.left[x], y))


def wspd_pairs(tree: SplitTree, s: float) -> np.ndarray:
    """Well-separated node pairs, one block per internal node in node order.

    A first pass counts the pairs under each internal node, a prefix sum gives
    each block its offset, and a second pass writes the pairs in place.
    """
    if s <= 2:
        raise DomainError("separation s must exceed 2")
    internal = np.flatnonzero(tree.left >= 0)
    counts = np.zeros(internal.shape[0], dtype=np.int64)
    for q, w in enumerate(internal):
        box = [0]

        def count(x, y, box=box):
            box[0] += 1

        _find_pairs(tree, tree.left[w], tree.right[w], s, count)
        counts[q] = box[0]
    offsets = np.zeros_like(counts)
    np.cumsum(counts[:-1], out=offsets[1:])
    out = np.empty((int(counts.sum()), 2), dtype=np.int64)
    for q, w in enumerate(internal):
        cursor = [offsets[q]]

        def write(x, y, cursor=cursor):
            out[cursor[0]] = (x, y)
            cursor[0] += 1

        _find_pairs(tree, tree.left[w], tree.right[w], s, write)
    return out


@dataclass(frozen=True, eq=False)
class WSPDSpanner:
    """Spanner edges between representatives of well-separated pairs.

    ``arcs`` lists undirected point-index pairs ``(i, j)`` with ``i < j``.
    """

    tree: SplitTree
    pairs: np.ndarray
    arcs: np.ndarray
    s: float


def build_wspd_spanner(points, s: float) -> WSPDSpanner:
    """Spanner with stretch at most ``1 + 4/s + 4/(s-2)`` over distinct points."""
    tree = build_split_tree(points)
    pairs = wspd_pairs(tree, s)
    if pairs.shape[0] == 0:
        return WSPDSpanner(tree, pairs, np.empty((0, 2), np.int64), s)
    ends = np.sort(tree.rep[pairs], axis=1)
    arcs = np.unique(ends, axis=0)
    return WSPDSpanner(tree, pairs, arcs, s)
