import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import explicit_rips_pairs, random_metric
from ripsflow.errors import CapacityError, NotSupportedError
from ripsflow.filtration import build_reduction_columns
from ripsflow.metric_io import DistanceInput, enclosing_radius, sparsify_by_threshold
from ripsflow.simplex_codec import BinomialTable, cidx_decode
from ripsflow.vr_engine import (KIND_APPARENT, KIND_EMERGENT, find_apparent_pairs,
                                reduce_column_oblivious, vr_barcode, zero_dim_persistence)

SQ2 = math.sqrt(2)


def bars(res, p):
    """Sorted (birth, death) list with inf deaths, including zero-length bars."""
    dg = res.diagrams[p]
    out = [tuple(r) for r in dg.finite.tolist()] + [(b, math.inf) for b in dg.infinite.tolist()]
    return sorted(out)


def equal_metric(n, value=1.0):
    return DistanceInput.from_matrix(np.full((n, n), value) - value * np.eye(n))


def distinct_metric(n):
    """Edge with index ``k`` gets distance ``N - k``: lexicographically later edges are shorter."""
    N = n * (n - 1) // 2
    return DistanceInput(n=n, tri=(N - np.arange(N)).astype(float))


# --- dimension 0 ---------------------------------------------------------


def test_zero_dim_two_points():
    dgm, comp = zero_dim_persistence(DistanceInput.from_points([[0.0], [1.0]]))
    assert dgm.finite.tolist() == [[0.0, 1.0]] and dgm.infinite.tolist() == [0.0]
    assert len(comp) == 0


def test_zero_dim_square(square):
    dgm, comp = zero_dim_persistence(square, SQ2)
    assert dgm.finite.tolist() == [[0.0, 1.0]] * 3 and dgm.infinite.tolist() == [0.0]
    assert sorted(comp.diam.tolist()) == [1.0, SQ2, SQ2]


def test_zero_dim_single_point():
    dgm, comp = zero_dim_persistence(DistanceInput.from_points([[3.0, 4.0]]))
    assert dgm.finite.shape == (0, 2) and dgm.infinite.tolist() == [0.0]


def test_zero_dim_disconnected_threshold():
    D = DistanceInput.from_points([[0.0], [1.0], [5.0]])
    dgm, _ = zero_dim_persistence(D, threshold=2.0)
    assert dgm.finite.tolist() == [[0.0, 1.0]] and dgm.infinite.tolist() == [0.0, 0.0]


# --- apparent pairs --------------------------------------------------------


def test_equilateral_triangle_one_apparent_pair():
    D = equal_metric(3)
    cols = build_reduction_columns(D, 1, math.inf)
    store, rest = find_apparent_pairs(cols, D)
    assert store.apparent_cofacet.tolist() == [0]
    # ties break by decreasing index, so edge (1,0) enters last and pairs with the triangle
    assert store.apparent_facet.tolist() == [0]
    _, pairs = explicit_rips_pairs(np.ones((3, 3)) - np.eye(3), 1)
    assert ((1, 0), (2, 1, 0)) in pairs[1]
    assert len(rest) == 2


@pytest.mark.parametrize("make", [equal_metric, distinct_metric])
def test_full_skeleton_apparent_fraction_n5(make):
    D = make(5)
    cols = build_reduction_columns(D, 1, math.inf)
    store, _ = find_apparent_pairs(cols, D)
    assert len(store.apparent_facet) == 6 and len(cols) == 10


def test_apparent_columns_agree_between_assignments():
    for n in range(4, 9):
        sets = []
        for make in (equal_metric, distinct_metric):
            D = make(n)
            store, _ = find_apparent_pairs(build_reduction_columns(D, 1, math.inf), D)
            sets.append(set(store.apparent_facet.tolist()))
        assert sets[0] == sets[1]
        assert len(sets[0]) == math.comb(n - 1, 2)


def test_apparent_pairs_are_true_pairs():
    rng = np.random.default_rng(11)
    for _ in range(30):
        D = DistanceInput.from_matrix(random_metric(rng, int(rng.integers(4, 10))))
        res = vr_barcode(D, 2, math.inf, include_zero=True)
        for p in (1, 2):
            cols = build_reduction_columns(D, p, math.inf, cleared=None)
            store, _ = find_apparent_pairs(cols, D)
            got = set(zip(store.apparent_facet.tolist(), store.apparent_cofacet.tolist()))
            assert got <= set(map(tuple, res.pairs[p].tolist()))


# --- barcodes --------------------------------------------------------------


def test_square_barcode(square):
    res = vr_barcode(square, 1)
    assert res.threshold == pytest.approx(SQ2)
    assert bars(res, 0) == [(0.0, 1.0)] * 3 + [(0.0, math.inf)]
    (b, d), = bars(res, 1)
    assert b == 1.0 and d == pytest.approx(SQ2, abs=1e-12)


def test_square_nonapparent_column_reduces_to_the_cycle(square):
    t = SQ2
    _, comp = zero_dim_persistence(square, t)
    store, rest = find_apparent_pairs(comp, square, t)
    assert len(rest) == 1
    piv = reduce_column_oblivious(rest[0], store, square, t)
    assert rest[0].diam == 1.0 and piv.diam == pytest.approx(SQ2)


def test_collinear_enclosing_radius():
    D = DistanceInput.from_points(np.array([0.0, 1.0, 3.0]))
    assert enclosing_radius(D) == 2.0
    res = vr_barcode(D, 1)
    full = vr_barcode(D, 1, math.inf)
    assert bars(res, 1) == [] == bars(full, 1)
    assert res.diagrams[0].same_multiset(full.diagrams[0])


def test_monotone_remap_example():
    base = np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], float)
    r1 = vr_barcode(DistanceInput.from_matrix(base), 2, math.inf, include_zero=True)
    r2 = vr_barcode(DistanceInput.from_matrix(base * 10), 2, math.inf, include_zero=True)
    for p in range(3):
        assert np.array_equal(r1.pairs[p], r2.pairs[p])
        assert np.array_equal(r1.pair_diams[p] * 10, r2.pair_diams[p])


@given(st.integers(0, 2**32 - 1))
def test_matches_explicit_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    mat = random_metric(rng, n)
    maxdim = int(rng.integers(0, 3))
    want, want_pairs = explicit_rips_pairs(mat, maxdim)
    D = DistanceInput.from_matrix(mat)
    res = vr_barcode(D, maxdim, math.inf, include_zero=True)
    tbl = BinomialTable(max(n, 1), maxdim + 2)
    for p in range(maxdim + 1):
        assert bars(res, p) == want[p]
        got = set()
        for b, d in res.pairs[p].tolist():
            birth = cidx_decode(b, p, tbl)
            got.add((birth, None if d < 0 else cidx_decode(d, p + 1, tbl)))
        assert got == want_pairs[p]


@given(st.integers(0, 2**32 - 1))
def test_modes_and_shortcuts_agree(seed):
    rng = np.random.default_rng(seed)
    D = DistanceInput.from_matrix(random_metric(rng, int(rng.integers(3, 12))))
    ref = vr_barcode(D, 2, math.inf, include_zero=True)
    for kw in ({"mode": "vmatrix"}, {"apparent": False}, {"emergent": False},
               {"apparent": False, "emergent": False}, {"mode": "vmatrix", "apparent": False}):
        other = vr_barcode(D, 2, math.inf, include_zero=True, **kw)
        for p in range(3):
            assert np.array_equal(ref.pairs[p], other.pairs[p])


def test_apparent_pairs_are_found_by_shortcut():
    rng = np.random.default_rng(3)
    for _ in range(20):
        D = DistanceInput.from_matrix(random_metric(rng, 9))
        ref = vr_barcode(D, 2, math.inf)
        off = vr_barcode(D, 2, math.inf, apparent=False)
        for p in (1, 2):
            ap = ref.kinds[p] == KIND_APPARENT
            assert np.all(off.kinds[p][ap] == KIND_EMERGENT)
            assert off.stats[p].emergent >= ref.stats[p].apparent


@pytest.mark.parametrize("kind", ["points", "ties"])
def test_worker_count_does_not_change_output(kind):
    rng = np.random.default_rng(8)
    D = DistanceInput.from_matrix(random_metric(rng, 40, kind))
    runs = [vr_barcode(D, 2, workers=w) for w in (1, 2, 8)]
    for r in runs[1:]:
        for p in range(3):
            assert np.array_equal(r.pairs[p], runs[0].pairs[p])
            assert np.array_equal(r.diagrams[p].finite, runs[0].diagrams[p].finite)


def test_sparse_matches_dense():
    rng = np.random.default_rng(9)
    for _ in range(30):
        D = DistanceInput.from_matrix(random_metric(rng, int(rng.integers(3, 12))))
        t = float(np.quantile(D.tri, rng.random()))
        S = sparsify_by_threshold(D, t)
        a = vr_barcode(D, 2, t, include_zero=True)
        b = vr_barcode(S, 2, t, include_zero=True)
        for p in range(3):
            assert np.array_equal(a.pairs[p], b.pairs[p])


def test_sparse_requires_threshold(square):
    with pytest.raises(NotSupportedError):
        vr_barcode(sparsify_by_threshold(square, 1.0), 1)


def test_capacity_checked_first():
    S = DistanceInput.from_pairs(10**6, [], [], [])
    with pytest.raises(CapacityError):
        vr_barcode(S, 5, threshold=1.0)


def test_zero_length_bars_suppressed_by_default():
    D = equal_metric(5)
    res = vr_barcode(D, 1, math.inf)
    assert res.diagrams[1].finite.shape[0] == 0
    full = vr_barcode(D, 1, math.inf, include_zero=True)
    assert full.diagrams[1].finite.shape[0] == math.comb(4, 2)


def test_stats_account_for_every_column():
    rng = np.random.default_rng(10)
    D = DistanceInput.from_matrix(random_metric(rng, 30, "points"))
    res = vr_barcode(D, 2)
    for st_ in res.stats[1:]:
        assert st_.apparent + st_.emergent + st_.reduced + st_.essential == st_.columns


@pytest.mark.parametrize("f", [np.sqrt, np.exp, lambda x: 3 * x + x ** 3])
def test_order_invariance_random(f):
    rng = np.random.default_rng(12)
    for _ in range(15):
        mat = random_metric(rng, int(rng.integers(3, 10)))
        g = f(mat)
        np.fill_diagonal(g, 0.0)
        a = vr_barcode(DistanceInput.from_matrix(mat), 2, math.inf, include_zero=True)
        b = vr_barcode(DistanceInput.from_matrix(g), 2, math.inf, include_zero=True)
        for p in range(3):
            assert np.array_equal(a.pairs[p], b.pairs[p])


def test_complementary_edges_are_dimension_one_columns():
    rng = np.random.default_rng(13)
    for _ in range(10):
        D = DistanceInput.from_matrix(random_metric(rng, 10))
        res = vr_barcode(D, 1, math.inf, include_zero=True)
        _, comp = zero_dim_persistence(D, math.inf)
        assert sorted(comp.cidx.tolist()) == sorted(res.pairs[1][:, 0].tolist())
        assert len(list(itertools.chain(comp))) == res.stats[1].columns
