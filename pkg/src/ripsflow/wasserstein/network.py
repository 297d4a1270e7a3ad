"""Transshipment networks for diagram transport."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import diagonal_distance
from ..errors import InfeasibleNetworkError

__all__ = ["TransshipmentNetwork", "build_transshipment_network", "build_bipartite_network"]


@dataclass(frozen=True, eq=False)
class TransshipmentNetwork:
    """Nodes with integer supplies and directed arcs with non-negative costs.

    Arcs are sorted by ``(tail, head)`` and ``indptr`` indexes the arcs leaving
    each node. Point nodes carry plane coordinates; the two diagonal nodes have
    ``nan`` coordinates. ``abar`` absorbs A-side mass sent to the diagonal and
    ``bbar`` emits the mass B-side nodes draw from it.
    """

    points: np.ndarray
    supply: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    cost: np.ndarray
    indptr: np.ndarray
    abar: int
    bbar: int

    @property
    def n_nodes(self) -> int:
        return self.supply.shape[0]

    @property
    def n_arcs(self) -> int:
        return self.tail.shape[0]

    @classmethod
    def from_arcs(cls, points, supply, tail, head, cost, abar=-1, bbar=-1
                  ) -> "TransshipmentNetwork":
        supply = np.asarray(supply, dtype=np.int64)
        if int(supply.sum()) != 0:
            raise InfeasibleNetworkError(f"supplies sum to {int(supply.sum())}, not 0")
        tail = np.asarray(tail, dtype=np.int64)
        head = np.asarray(head, dtype=np.int64)
        cost = np.asarray(cost, dtype=np.float64)
        if np.any(cost < 0):
            raise ValueError("arc costs must be non-negative")
        order = np.lexsort((head, tail))
        tail, head, cost = tail[order], head[order], cost[order]
        nn = supply.shape[0]
        indptr = np.zeros(nn + 1, dtype=np.int64)
        np.add.at(indptr, tail + 1, 1)
        np.cumsum(indptr, out=indptr)
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        return cls(pts, supply, tail, head, cost, indptr, abar, bbar)


def build_transshipment_network(a_points, a_supply, b_points, b_supply,
                                arcs=None) -> TransshipmentNetwork:
    """Network over A-side and B-side nodes plus the two diagonal nodes.

    Parameters
    ----------
    a_points, b_points : ndarray, shape (k, 2)
        Node positions. A co-located A/B pair stays as two nodes.
    a_supply, b_supply : ndarray of int
        Positive masses. A-side nodes are sources and B-side nodes sinks.
    arcs : ndarray, shape (m, 2), optional
        Undirected node pairs over the concatenated A then B nodes; each gets
        arcs both ways at Euclidean cost. ``None`` gives the complete
        bipartite arcs A -> B.

    Node order is A nodes, B nodes, ``abar``, ``bbar``. ``abar`` takes supply
    ``-sum(a_supply)`` and ``bbar`` takes ``+sum(b_supply)``.
    """
    a_pts = np.asarray(a_points, dtype=np.float64).reshape(-1, 2)
    b_pts = np.asarray(b_points, dtype=np.float64).reshape(-1, 2)
    a_sup = np.asarray(a_supply, dtype=np.int64)
    b_sup = np.asarray(b_supply, dtype=np.int64)
    if np.any(a_sup <= 0) or np.any(b_sup <= 0):
        raise ValueError("node masses must be positive")
    na, nb = a_pts.shape[0], b_pts.shape[0]
    abar, bbar = na + nb, na + nb + 1
    pts = np.vstack([a_pts, b_pts, np.full((2, 2), np.nan)])
    supply = np.concatenate([a_sup, -b_sup, [-a_sup.sum(), b_sup.sum()]])

    a_ids = np.arange(na)
    b_ids = np.arange(na, na + nb)
    if arcs is None:
        tail = np.repeat(a_ids, nb)
        head = np.tile(b_ids, na)
    else:
        arcs = np.asarray(arcs, dtype=np.int64).reshape(-1, 2)
        tail = np.concatenate([arcs[:, 0], arcs[:, 1]])
        head = np.concatenate([arcs[:, 1], arcs[:, 0]])
    real = np.hypot(*(pts[tail] - pts[head]).T) if tail.size else np.empty(0)
    tail = np.concatenate([tail, a_ids, np.full(nb, bbar), [bbar]])
    head = np.concatenate([head, np.full(na, abar), b_ids, [abar]])
    cost = np.concatenate([real, diagonal_distance(a_pts), diagonal_distance(b_pts), [0.0]])
    return TransshipmentNetwork.from_arcs(pts, supply, tail, head, cost, abar, bbar)


def build_bipartite_network(a_points, a_supply, b_points, b_supply) -> TransshipmentNetwork:
    """Complete bipartite network used for the exact distance."""
    return build_transshipment_network(a_points, a_supply, b_points, b_supply, arcs=None)
