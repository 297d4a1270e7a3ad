import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_mcf, hungarian_w1, matching_w1, random_diagram
from oracles import spanner_stretch as graph_stretch
from ripsflow.diagram import PersistenceDiagram
from ripsflow.errors import DomainError, InfeasibleNetworkError
from ripsflow.wasserstein import (TransshipmentNetwork, approx_w1, approx_w1_report,
                                  build_split_tree, build_transshipment_network,
                                  build_wspd_spanner, condensation_epsilon, delta_condense,
                                  exact_w1, exact_w1_report, iteration_cap,
                                  network_simplex_mcf, rwmd_lower_bound, spanner_stretch,
                                  theoretical_error_bound, wcd_lower_bound, weighted_exact_w1,
                                  wspd_pairs)

A1 = np.array([[0.0, 2.0]])
B1 = np.array([[0.0, 4.0]])
EMPTY = np.empty((0, 2))


def diagrams(max_points=12):
    return st.builds(lambda seed, k, dup: random_diagram(np.random.default_rng(seed), k, dup),
                     st.integers(0, 2**32 - 1), st.integers(0, max_points), st.floats(0, 0.5))


# --- exact distance --------------------------------------------------------


def test_exact_examples():
    assert exact_w1(A1, A1) == 0.0
    assert exact_w1(A1, B1) == pytest.approx(2.0, abs=1e-12)
    assert exact_w1(A1, EMPTY) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert exact_w1(EMPTY, EMPTY) == 0.0


def test_infinite_bars_ignored():
    A = PersistenceDiagram(A1, [0.0, 1.0])
    assert exact_w1(A, PersistenceDiagram(B1)) == pytest.approx(2.0, abs=1e-12)
    assert exact_w1(np.array([[0.0, 2.0], [1.0, np.inf]]), B1) == pytest.approx(2.0)


def test_network_construction_example():
    net = build_transshipment_network(A1, [1], B1, [1])
    assert net.n_nodes == 4
    assert net.supply.tolist() == [1, -1, -1, 1]
    assert (net.abar, net.bbar) == (2, 3)
    costs = dict(zip(zip(net.tail.tolist(), net.head.tolist()), net.cost.tolist()))
    assert costs == pytest.approx({(0, 1): 2.0, (0, 2): math.sqrt(2), (3, 1): 2 * math.sqrt(2),
                                   (3, 2): 0.0})
    assert network_simplex_mcf(net).value == pytest.approx(2.0, abs=1e-12)


def test_empty_network():
    net = build_transshipment_network(EMPTY, [], EMPTY, [])
    assert net.n_nodes == 2 and net.n_arcs == 1
    res = network_simplex_mcf(net)
    assert res.value == 0.0 and res.flow.tolist() == [0] and res.optimal


def test_zero_supply_network():
    net = TransshipmentNetwork.from_arcs(np.zeros((3, 2)), [0, 0, 0], [0, 1], [1, 2], [1.0, 2.0])
    assert network_simplex_mcf(net).value == 0.0


def test_supply_must_balance():
    with pytest.raises(InfeasibleNetworkError):
        TransshipmentNetwork.from_arcs(np.zeros((2, 2)), [1, 0], [0], [1], [1.0])


def test_unreachable_demand_is_infeasible():
    net = TransshipmentNetwork.from_arcs(np.zeros((3, 2)), [1, 0, -1], [0], [1], [1.0])
    with pytest.raises(InfeasibleNetworkError):
        network_simplex_mcf(net)


def random_network(rng):
    n = int(rng.integers(2, 7))
    supply = np.zeros(n, np.int64)
    units = int(rng.integers(1, 4))
    for _ in range(units):
        a, b = rng.choice(n, 2, replace=False)
        supply[a] += 1
        supply[b] -= 1
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.5]
    tail = np.array([p[0] for p in pairs], np.int64)
    head = np.array([p[1] for p in pairs], np.int64)
    cost = rng.integers(0, 6, len(pairs)).astype(float)
    return supply, tail, head, cost


def check_optimality(net, res):
    out = np.zeros(net.n_nodes, np.int64)
    np.add.at(out, net.tail, res.flow)
    np.add.at(out, net.head, -res.flow)
    assert np.array_equal(out, net.supply)
    assert np.all(res.flow >= 0)
    rc = net.cost + res.potentials[net.tail] - res.potentials[net.head]
    tol = 1e-9 * (1 + net.cost.max(initial=0))
    assert np.all(rc >= -tol)
    assert np.all(np.abs(rc[res.flow > 0]) <= tol)
    assert res.value == pytest.approx(float(net.cost @ res.flow), abs=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_network_simplex_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    supply, tail, head, cost = random_network(rng)
    want = brute_force_mcf(supply, tail, head, cost)
    net = TransshipmentNetwork.from_arcs(np.zeros((len(supply), 2)), supply, tail, head, cost)
    if math.isinf(want):
        with pytest.raises(InfeasibleNetworkError):
            network_simplex_mcf(net)
        return
    res = network_simplex_mcf(net)
    assert res.optimal
    assert res.value == pytest.approx(want, abs=1e-9)
    check_optimality(net, res)


def test_pivot_cap_stops_early():
    rng = np.random.default_rng(1)
    A, B = random_diagram(rng, 15), random_diagram(rng, 15)
    net = build_transshipment_network(A, np.ones(15, int), B, np.ones(15, int))
    res = network_simplex_mcf(net, max_pivots=1)
    assert res.pivots <= 1 and not res.optimal
    assert iteration_cap(100, 400, 2.0, 5) == int(2 * 200 + 5)


@given(diagrams(), diagrams())
def test_exact_matches_assignment_oracle(A, B):
    got = exact_w1(A, B)
    assert got == pytest.approx(hungarian_w1(A, B), rel=1e-9, abs=1e-9)
    net = build_transshipment_network(*_merged(A), *_merged(B))
    check_optimality(net, network_simplex_mcf(net))


def _merged(X):
    if len(X) == 0:
        return EMPTY, np.zeros(0, np.int64)
    u, c = np.unique(X, axis=0, return_counts=True)
    return u, c


def test_exact_matches_enumeration_small():
    rng = np.random.default_rng(2)
    for _ in range(40):
        A = random_diagram(rng, int(rng.integers(0, 4)))
        B = random_diagram(rng, int(rng.integers(0, 4)))
        assert exact_w1(A, B) == pytest.approx(matching_w1(A, B), abs=1e-12)


@given(diagrams(8), diagrams(8), diagrams(8))
def test_metric_axioms(A, B, C):
    ab, ba = exact_w1(A, B), exact_w1(B, A)
    assert ab == pytest.approx(ba, abs=1e-12)
    assert ab <= exact_w1(A, C) + exact_w1(C, B) + 1e-9
    assert exact_w1(A, A) == 0.0


def test_weighted_matches_expanded():
    rng = np.random.default_rng(3)
    pa, pb = random_diagram(rng, 4, 0), random_diagram(rng, 3, 0)
    wa, wb = np.array([1, 3, 2, 1]), np.array([2, 2, 1])
    rep = weighted_exact_w1(pa, wa, pb, wb)
    want = hungarian_w1(np.repeat(pa, wa, axis=0), np.repeat(pb, wb, axis=0))
    assert rep.value == pytest.approx(want, abs=1e-9) and rep.exact


# --- bounds ----------------------------------------------------------------


def test_lower_bound_examples():
    assert rwmd_lower_bound(A1, A1) == 0.0 and wcd_lower_bound(A1, A1) == 0.0
    assert rwmd_lower_bound(A1, B1) == pytest.approx(2.0)
    assert wcd_lower_bound(A1, B1) == pytest.approx(math.sqrt(0.5) / 2)
    assert wcd_lower_bound(EMPTY, EMPTY) == 0.0


@given(diagrams(20), diagrams(20))
def test_lower_bounds_below_exact(A, B):
    w = exact_w1(A, B)
    assert rwmd_lower_bound(A, B) <= w + 1e-9
    assert wcd_lower_bound(A, B) <= w + 1e-9


def test_factor_formulas():
    assert condensation_epsilon(40) == pytest.approx(8 / 36)
    assert condensation_epsilon(8) == 1.0
    assert theoretical_error_bound(40) == pytest.approx(0.473, abs=1e-3)
    assert theoretical_error_bound(93) == pytest.approx(0.185, abs=1e-3)
    assert theoretical_error_bound(math.inf) == 0.0
    assert theoretical_error_bound(1e9) < 1e-7
    assert spanner_stretch(40) == pytest.approx(1 + 0.1 + 4 / 38)
    for f in (spanner_stretch, condensation_epsilon, theoretical_error_bound):
        with pytest.raises(DomainError):
            f(2)


# --- condensation ----------------------------------------------------------


def test_condense_identity_when_bound_vanishes():
    A = np.array([[0.0, 1.0], [0.0, 1.0], [2.0, 5.0]])
    cp = delta_condense(A, A, 40)
    assert cp.delta == 0.0
    assert cp.a_points.tolist() == [[0.0, 1.0], [2.0, 5.0]] and cp.a_supply.tolist() == [2, 1]


def test_condense_merges_clusters():
    A = np.repeat([[0.0, 10.0]], 10, axis=0)
    B = np.repeat([[50.0, 100.0]], 10, axis=0)
    cp = delta_condense(A, B, 40)
    assert cp.a_points.shape[0] <= 2 and cp.b_points.shape[0] <= 2
    assert cp.a_supply.sum() == 10 and cp.b_supply.sum() == 10
    w = exact_w1(A, B)
    got = weighted_exact_w1(cp.a_points, cp.a_supply, cp.b_points, cp.b_supply).value
    assert abs(got - w) <= cp.epsilon * w + 1e-9


def test_condense_is_seeded():
    rng = np.random.default_rng(4)
    A, B = random_diagram(rng, 12), random_diagram(rng, 9)
    c1, c2 = delta_condense(A, B, 20, seed=5), delta_condense(A, B, 20, seed=5)
    assert np.array_equal(c1.a_points, c2.a_points) and np.array_equal(c1.b_points, c2.b_points)


@pytest.mark.parametrize("s", [12, 20, 40])
def test_condensation_sandwich(s):
    rng = np.random.default_rng(s)
    for _ in range(25):
        A = random_diagram(rng, int(rng.integers(1, 15)))
        B = random_diagram(rng, int(rng.integers(1, 15)))
        w = exact_w1(A, B)
        cp = delta_condense(A, B, s)
        got = weighted_exact_w1(cp.a_points, cp.a_supply, cp.b_points, cp.b_supply).value
        eps = condensation_epsilon(s)
        assert (1 - eps) * w - 1e-9 <= got <= (1 + eps) * w + 1e-9


# --- split tree and spanner ------------------------------------------------


def coverage_counts(points, s):
    tree = build_split_tree(points)
    pairs = wspd_pairs(tree, s)
    cover = {}
    for u, v in pairs:
        for a, b in itertools.product(tree.members(u), tree.members(v)):
            key = (min(a, b), max(a, b))
            cover[key] = cover.get(key, 0) + 1
    return cover, tree, pairs


def test_two_points():
    sp = build_wspd_spanner([[0.0, 0.0], [1.0, 3.0]], 8)
    assert sp.pairs.shape == (1, 2) and sp.arcs.tolist() == [[0, 1]]


def test_square_coverage_unique():
    cover, _, _ = coverage_counts(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float), 8)
    assert set(cover) == set(itertools.combinations(range(4), 2))
    assert set(cover.values()) == {1}


def test_split_tree_structure():
    rng = np.random.default_rng(5)
    P = rng.random((50, 2))
    tree = build_split_tree(P)
    assert tree.n_nodes == 99
    for k in range(tree.n_nodes):
        m = tree.members(k)
        assert np.allclose(tree.lo[k], P[m].min(axis=0)) and np.allclose(tree.hi[k], P[m].max(axis=0))
        assert tuple(P[tree.rep[k]]) == min(map(tuple, P[m]))
        if not tree.is_leaf(k):
            kids = np.concatenate([tree.members(tree.left[k]), tree.members(tree.right[k])])
            assert sorted(kids.tolist()) == sorted(m.tolist())
    with pytest.raises(ValueError):
        build_split_tree([[0.0, 0.0], [0.0, 0.0]])


@given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.sampled_from([3, 8, 12, 40]))
def test_wspd_covers_each_pair_once(seed, n, s):
    rng = np.random.default_rng(seed)
    P = np.unique(np.round(rng.random((n, 2)) * 50) / 50, axis=0)
    if len(P) < 2:
        return
    cover, tree, pairs = coverage_counts(P, s)
    assert len(cover) == len(P) * (len(P) - 1) // 2
    assert set(cover.values()) == {1}


@pytest.mark.parametrize("s", [8, 12, 40])
def test_spanner_stretch(s):
    rng = np.random.default_rng(s)
    for n in (2, 30, 120):
        P = rng.random((n, 2)) * rng.uniform(0.1, 100)
        sp = build_wspd_spanner(P, s)
        assert graph_stretch(P, sp.arcs) <= spanner_stretch(s) + 1e-12


# --- approximate distance --------------------------------------------------


def test_approx_examples():
    assert approx_w1(A1, A1) == 0.0
    assert approx_w1(EMPTY, EMPTY) == 0.0
    assert approx_w1(A1, EMPTY) == pytest.approx(math.sqrt(2), rel=0.5)
    with pytest.raises(DomainError):
        approx_w1(A1, B1, s=2)


@pytest.mark.parametrize("s", [12, 40, 93])
def test_approx_within_factor(s):
    rng = np.random.default_rng(100 + s)
    factor = 1 + theoretical_error_bound(s)
    for _ in range(25):
        A = random_diagram(rng, int(rng.integers(1, 31)))
        B = random_diagram(rng, int(rng.integers(1, 31)))
        w, a = exact_w1(A, B), approx_w1(A, B, s)
        assert a <= factor * w + 1e-9
        assert a >= w / factor - 1e-9


def test_approx_deterministic_and_reported():
    rng = np.random.default_rng(6)
    A, B = random_diagram(rng, 20), random_diagram(rng, 20)
    r1, r2 = approx_w1_report(A, B, 40, seed=3), approx_w1_report(A, B, 40, seed=3)
    assert r1.value == r2.value and not r1.exact
    assert set(r1.as_dict()) == {"value", "delta", "nodes", "arcs", "pivots", "exact"}
    ex = exact_w1_report(A, B)
    assert ex.exact and ex.delta == 0.0
