"""Exact and approximate 1-Wasserstein distance between persistence diagrams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ._points import as_points, merge_duplicates
from .condense import DEFAULT_SEED, delta_condense
from .network import build_bipartite_network, build_transshipment_network
from .network_simplex import network_simplex_mcf
from .wspd import build_wspd_spanner

__all__ = ["W1Report", "exact_w1", "weighted_exact_w1", "approx_w1", "approx_w1_report"]


@dataclass
class W1Report:
    """Value of a distance computation plus the size of the solved network."""

    value: float
    delta: float
    nodes: int
    arcs: int
    pivots: int
    exact: bool

    def as_dict(self) -> dict:
        return dict(value=self.value, delta=self.delta, nodes=self.nodes, arcs=self.arcs,
                    pivots=self.pivots, exact=self.exact)


def weighted_exact_w1(a_points, a_mass, b_points, b_mass) -> W1Report:
    """Exact transport cost between weighted point sets with diagonal sinks."""
    net = build_bipartite_network(a_points, a_mass, b_points, b_mass)
    res = network_simplex_mcf(net)
    return W1Report(res.value, 0.0, net.n_nodes, net.n_arcs, res.pivots, True)


def exact_w1(A, B) -> float:
    """Exact W1 with Euclidean ground cost; infinite bars are ignored.

    Duplicate points merge into one node carrying their multiplicity and the
    complete bipartite network is solved to optimality.
    """
    return exact_w1_report(A, B).value


def exact_w1_report(A, B) -> W1Report:
    ap, aw = merge_duplicates(as_points(A))
    bp, bw = merge_duplicates(as_points(B))
    return weighted_exact_w1(ap, aw, bp, bw)


def approx_w1_report(A, B, s: float = 40.0, seed: int | None = DEFAULT_SEED) -> W1Report:
    """Condense, build the spanner network and solve it.

    Co-located A-side and B-side nodes (same lattice point) are joined by a
    zero-cost arc pair; every other spanner edge joins the nodes that
    represent its two positions.
    """
    if s <= 2:
        raise DomainError("separation s must exceed 2")
    cp = delta_condense(A, B, s, seed)
    na, nb = cp.a_points.shape[0], cp.b_points.shape[0]
    if na + nb == 0:
        return W1Report(0.0, cp.delta, 2, 1, 0, False)
    allpts = np.vstack([cp.a_points, cp.b_points])
    positions, node_pos = np.unique(allpts, axis=0, return_inverse=True)
    node_pos = node_pos.reshape(-1)
    # one hub node per position: its A-side node when present
    hub = np.full(positions.shape[0], -1, dtype=np.int64)
    for node in range(na + nb - 1, -1, -1):
        hub[node_pos[node]] = node
    arcs = []
    if positions.shape[0] > 1:
        sp = build_wspd_spanner(positions, s)
        arcs.append(hub[sp.arcs])
    twins = np.flatnonzero(hub[node_pos[na:]] != np.arange(na, na + nb))
    if twins.size:
        arcs.append(np.column_stack([hub[node_pos[na + twins]], na + twins]))
    arcs_a = np.vstack(arcs) if arcs else np.empty((0, 2), np.int64)
    net = build_transshipment_network(cp.a_points, cp.a_supply, cp.b_points, cp.b_supply,
                                      arcs=arcs_a)
    res = network_simplex_mcf(net)
    return W1Report(res.value, cp.delta, net.n_nodes, net.n_arcs, res.pivots, False)


def approx_w1(A, B, s: float = 40.0, seed: int | None = DEFAULT_SEED) -> float:
    """W1 within the factor ``(1 + 4/s + 4/(s-2)) * (1 + 8/(s-4))`` for ``s >= 12``.

    Deterministic for a fixed ``seed``.
    """
    return approx_w1_report(A, B, s, seed).value
