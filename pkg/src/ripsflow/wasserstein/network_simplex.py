"""Primal network simplex for uncapacitated min-cost flow.

The basis is a spanning tree rooted at an artificial node. Every node starts
attached to the root: supply nodes through a zero-cost arc into the root and
demand nodes through an arc out of the root whose cost exceeds any simple path
of real arcs. Entering arcs come from block search over the real arcs with
block size ``ceil(sqrt(m))``; the leaving arc follows the strongly feasible
rule, so degenerate pivots cannot cycle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import InfeasibleNetworkError
from .network import TransshipmentNetwork

__all__ = ["MCFResult", "network_simplex_mcf", "iteration_cap"]


@dataclass
class MCFResult:
    """Solution of a min-cost flow problem.

    Attributes
    ----------
    value : float
        Total cost of ``flow``.
    optimal : bool
        True when every real arc has non-negative reduced cost at exit.
    flow : ndarray of int
        Flow on each real arc, aligned with the network's arc arrays.
    potentials : ndarray
        Node potentials; reduced cost is ``cost + pi[tail] - pi[head]``.
    pivots : int
        Number of basis exchanges.
    """

    value: float
    optimal: bool
    flow: np.ndarray
    potentials: np.ndarray
    pivots: int


def iteration_cap(n_nodes: int, n_arcs: int, C: float, b: float) -> int:
    """Pivot limit ``C * sqrt(m * n) + b``."""
    return int(C * math.sqrt(max(n_arcs, 1) * max(n_nodes, 1)) + b)


def network_simplex_mcf(net: TransshipmentNetwork, max_pivots: int | None = None
                        ) -> MCFResult:
    """Minimum-cost flow of ``net`` meeting every supply exactly.

    Parameters
    ----------
    net : TransshipmentNetwork
    max_pivots : int, optional
        Stop after this many pivots and report ``optimal=False``. The flow
        returned then may still route supply through the artificial root and
        need not meet every supply. By default the method runs until no arc
        has negative reduced cost.

    Raises
    ------
    InfeasibleNetworkError
        If the supplies cannot be routed along the arcs.
    """
    n = net.n_nodes
    m = net.n_arcs
    root = n
    supply = net.supply
    if int(supply.sum()) != 0:
        raise InfeasibleNetworkError("supplies do not sum to zero")
    max_cost = float(net.cost.max()) if m else 0.0
    art = (max_cost + 1.0) * (n + 1)
    tol = 1e-12 * (max_cost + 1.0)

    nodes = np.arange(n)
    src = supply >= 0
    tail = np.concatenate([net.tail, np.where(src, nodes, root)])
    head = np.concatenate([net.head, np.where(src, root, nodes)])
    cost = np.concatenate([net.cost, np.where(src, 0.0, art)])
    flow = np.concatenate([np.zeros(m, dtype=np.int64), np.abs(supply)])
    tail_l = tail.tolist()
    head_l = head.tolist()
    cost_l = cost.tolist()

    parent = [root] * n + [-1]
    pred = list(range(m, m + n)) + [-1]
    up = src.tolist() + [False]
    depth = [1] * n + [0]
    pi = np.where(src, 0.0, art)
    pi = np.append(pi, 0.0)
    adj: list[set[int]] = [{m + u} for u in range(n)] + [set(range(m, m + n))]

    block = max(1, math.ceil(math.sqrt(m))) if m else 1
    nxt = 0
    pivots = 0
    optimal = m == 0

    while m:
        if max_pivots is not None and pivots >= max_pivots:
            break
        # block search for the entering arc
        entering = -1
        scanned = 0
        while scanned < m:
            stop = min(nxt + block, m)
            rc = net.cost[nxt:stop] + pi[net.tail[nxt:stop]] - pi[net.head[nxt:stop]]
            k = int(np.argmin(rc))
            scanned += stop - nxt
            start = nxt
            nxt = stop % m
            if rc[k] < -tol:
                entering = start + k
                break
        if entering < 0:
            optimal = True
            break

        u, v = tail_l[entering], head_l[entering]
        # join node of the cycle
        a, b = u, v
        while a != b:
            if depth[a] > depth[b]:
                a = parent[a]
            elif depth[b] > depth[a]:
                b = parent[b]
            else:
                a, b = parent[a], parent[b]
        join = a

        # leaving arc: first path u..join, then v..join with ties to the later one
        delta = math.inf
        out_node = -1
        x = u
        while x != join:
            if up[x] and flow[pred[x]] < delta:
                delta = int(flow[pred[x]])
                out_node = x
            x = parent[x]
        x = v
        while x != join:
            if not up[x] and flow[pred[x]] <= delta:
                delta = int(flow[pred[x]])
                out_node = x
            x = parent[x]
        if out_node < 0:
            raise InfeasibleNetworkError("negative-cost cycle of unbounded capacity")

        if delta:
            flow[entering] += delta
            x = u
            while x != join:
                flow[pred[x]] += -delta if up[x] else delta
                x = parent[x]
            x = v
            while x != join:
                flow[pred[x]] += delta if up[x] else -delta
                x = parent[x]

        leaving = pred[out_node]
        adj[tail_l[leaving]].discard(leaving)
        adj[head_l[leaving]].discard(leaving)
        adj[u].add(entering)
        adj[v].add(entering)
        _rebuild_tree(root, adj, tail_l, head_l, cost_l, parent, pred, up, depth, pi)
        pivots += 1

    if optimal and np.any(flow[m:] > 0):
        raise InfeasibleNetworkError("supplies cannot be routed through the arcs")
    real = flow[:m]
    value = math.fsum((net.cost * real).tolist())
    return MCFResult(value, optimal, real.copy(), pi[:n].copy(), pivots)


def _rebuild_tree(root, adj, tail, head, cost, parent, pred, up, depth, pi) -> None:
    """Recompute the spanning-tree labels (parents, depths, potentials) by BFS from the root."""
    seen = {root}
    queue = deque([root])
    while queue:
        p = queue.popleft()
        for e in adj[p]:
            c = head[e] if tail[e] == p else tail[e]
            if c in seen:
                continue
            seen.add(c)
            parent[c] = p
            pred[c] = e
            depth[c] = depth[p] + 1
            if tail[e] == c:
                up[c] = True
                pi[c] = pi[p] - cost[e]
            else:
                up[c] = False
                pi[c] = pi[p] + cost[e]
            queue.append(c)
