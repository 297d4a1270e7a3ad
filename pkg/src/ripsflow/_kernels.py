"""Compiled kernels for the implicit Rips engine.

The metric is passed as a tuple ``M = (dense, mat, indptr, indices, values)``.
Dense input uses ``mat``; sparse input uses the CSR arrays and unused slots hold
small dummies. All kernels release the GIL so chunked calls can run on a
thread pool, each chunk writing to its own slice of a preallocated output.
"""

from __future__ import annotations

import heapq

import numpy as np
from numba import njit
from numba import types
from numba.typed import Dict, List

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def dist(i, j, M):
    if i == j:
        return 0.0
    if M[0]:
        return M[1][i, j]
    indptr, indices, values = M[2], M[3], M[4]
    lo = indptr[i]
    hi = indptr[i + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        if indices[mid] < j:
            lo = mid + 1
        else:
            hi = mid
    if lo < indptr[i + 1] and indices[lo] == j:
        return values[lo]
    return np.inf


@njit(**_JIT)
def decode(idx, dim, n, binom, out):
    """Write the vertices of ``idx`` into ``out[0..dim]`` in decreasing order."""
    hi = n
    for pos in range(dim + 1):
        k = dim + 1 - pos
        # largest v in [k-1, hi) with C(v, k) <= idx
        lo = k - 1
        top = hi - 1
        while lo < top:
            mid = (lo + top + 1) >> 1
            if binom[mid, k] <= idx:
                lo = mid
            else:
                top = mid - 1
        out[pos] = lo
        idx -= binom[lo, k]
        hi = lo


@njit(**_JIT)
def encode(verts, dim, binom):
    total = 0
    for pos in range(dim + 1):
        total += binom[verts[pos], dim + 1 - pos]
    return total


@njit(**_JIT)
def diameter(verts, dim, M):
    best = 0.0
    for a in range(dim + 1):
        for b in range(a):
            d = dist(verts[a], verts[b], M)
            if d > best:
                best = d
    return best


@njit(**_JIT)
def cofacets(idx, dim, diam, verts, n, binom, M, thr, mode, out_idx, out_diam):
    """Enumerate cofacets with diameter ``<= thr`` in decreasing index order.

    ``mode`` 0 writes all of them. ``mode`` 1 stops at the first cofacet whose
    diameter equals ``diam`` and writes only that one. ``mode`` 2 writes only
    cofacets whose new vertex exceeds every vertex of the simplex (each
    simplex of the next dimension is then produced by exactly one facet).
    Returns the number of entries written.
    """
    count = 0
    if M[0]:
        mat = M[1]
        k = dim + 1
        below = idx
        above = 0
        pos = 0
        for v in range(n - 1, -1, -1):
            if pos <= dim and verts[pos] == v:
                if mode == 2:
                    return count
                below -= binom[v, k]
                above += binom[v, k + 1]
                k -= 1
                pos += 1
                continue
            d = diam
            for a in range(dim + 1):
                x = mat[v, verts[a]]
                if x > d:
                    d = x
            if d > thr:
                continue
            if mode == 1:
                if d == diam:
                    out_idx[0] = above + binom[v, k + 1] + below
                    out_diam[0] = d
                    return 1
                continue
            out_idx[count] = above + binom[v, k + 1] + below
            out_diam[count] = d
            count += 1
        return count

    indptr, indices, values = M[2], M[3], M[4]
    base = 0
    best = indptr[verts[0] + 1] - indptr[verts[0]]
    for a in range(1, dim + 1):
        deg = indptr[verts[a] + 1] - indptr[verts[a]]
        if deg < best:
            best = deg
            base = a
    ptr = np.empty(dim + 1, dtype=np.int64)
    for a in range(dim + 1):
        ptr[a] = indptr[verts[a] + 1] - 1
    new = np.empty(dim + 2, dtype=np.int64)
    b_lo = indptr[verts[base]]
    for bp in range(indptr[verts[base] + 1] - 1, b_lo - 1, -1):
        cand = indices[bp]
        if mode == 2 and cand < verts[0]:
            return count
        d = values[bp]
        if diam > d:
            d = diam
        common = True
        for a in range(dim + 1):
            if a == base:
                continue
            lo = indptr[verts[a]]
            p = ptr[a]
            while p >= lo and indices[p] > cand:
                p -= 1
            ptr[a] = p
            if p < lo:
                return count
            if indices[p] != cand:
                common = False
                break
            if values[p] > d:
                d = values[p]
        if not common or d > thr:
            continue
        # cand is never a vertex of the simplex: no list contains its own vertex
        q = 0
        placed = False
        for a in range(dim + 1):
            if not placed and cand > verts[a]:
                new[q] = cand
                q += 1
                placed = True
            new[q] = verts[a]
            q += 1
        if not placed:
            new[q] = cand
        c = encode(new, dim + 1, binom)
        if mode == 1:
            if d == diam:
                out_idx[0] = c
                out_diam[0] = d
                return 1
            continue
        out_idx[count] = c
        out_diam[count] = d
        count += 1
    return count


@njit(**_JIT)
def youngest_facet_is(t_idx, t_dim, diam, s_idx, n, binom, M, tverts, rest):
    """True when ``s_idx`` is the first facet of ``t`` (increasing index) of diameter ``diam``."""
    decode(t_idx, t_dim, n, binom, tverts)
    d = t_dim
    below = t_idx - binom[tverts[0], d + 1]
    above = 0
    for pos in range(d + 1):
        j = d - pos
        q = 0
        for a in range(d + 1):
            if a != pos:
                rest[q] = tverts[a]
                q += 1
        if diameter(rest, d - 1, M) == diam:
            return above + below == s_idx
        if j > 0:
            above += binom[tverts[pos], j]
            below -= binom[tverts[pos + 1], j]
    return False


@njit(**_JIT)
def apparent_chunk(col_idx, col_diam, start, stop, dim, n, binom, M, thr, out):
    """``out[i]`` = apparent cofacet of column ``i``, or -1."""
    verts = np.empty(dim + 1, dtype=np.int64)
    tverts = np.empty(dim + 2, dtype=np.int64)
    rest = np.empty(dim + 1, dtype=np.int64)
    one_i = np.empty(1, dtype=np.int64)
    one_d = np.empty(1, dtype=np.float64)
    for i in range(start, stop):
        idx = col_idx[i]
        diam = col_diam[i]
        decode(idx, dim, n, binom, verts)
        out[i] = -1
        if cofacets(idx, dim, diam, verts, n, binom, M, thr, 1, one_i, one_d) == 0:
            continue
        if youngest_facet_is(one_i[0], dim + 1, diam, idx, n, binom, M, tverts, rest):
            out[i] = one_i[0]


@njit(**_JIT)
def diameters_chunk(idx, start, stop, dim, n, binom, M, out):
    verts = np.empty(dim + 1, dtype=np.int64)
    for i in range(start, stop):
        decode(idx[i], dim, n, binom, verts)
        out[i] = diameter(verts, dim, M)


@njit(**_JIT)
def expand_count(idx, diam, start, stop, dim, n, binom, M, thr, counts):
    """Number of next-dimension simplices grown from each simplex in the chunk."""
    verts = np.empty(dim + 1, dtype=np.int64)
    buf_i = np.empty(n, dtype=np.int64)
    buf_d = np.empty(n, dtype=np.float64)
    for i in range(start, stop):
        decode(idx[i], dim, n, binom, verts)
        counts[i] = cofacets(idx[i], dim, diam[i], verts, n, binom, M, thr, 2, buf_i, buf_d)


@njit(**_JIT)
def expand_write(idx, diam, start, stop, dim, n, binom, M, thr, offsets, out_idx, out_diam):
    verts = np.empty(dim + 1, dtype=np.int64)
    buf_i = np.empty(n, dtype=np.int64)
    buf_d = np.empty(n, dtype=np.float64)
    for i in range(start, stop):
        decode(idx[i], dim, n, binom, verts)
        c = cofacets(idx[i], dim, diam[i], verts, n, binom, M, thr, 2, buf_i, buf_d)
        o = offsets[i]
        for q in range(c):
            out_idx[o + q] = buf_i[q]
            out_diam[o + q] = buf_d[q]


@njit(cache=True)
def union_find_edges(n, edge_idx, edge_diam, binom):
    """Kruskal with the elder rule over edges already in filtration order.

    Returns ``(birth_vertex, death_edge_pos, is_tree)``. The oldest vertex of a
    component is its largest index, since vertices enter by decreasing index.
    """
    parent = np.arange(n)
    elder = np.arange(n)
    m = edge_idx.shape[0]
    birth = np.empty(n, dtype=np.int64)
    death = np.empty(n, dtype=np.int64)
    is_tree = np.zeros(m, dtype=np.bool_)
    npairs = 0
    verts = np.empty(2, dtype=np.int64)
    for e in range(m):
        decode(edge_idx[e], 1, n, binom, verts)
        a = verts[0]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = verts[1]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        is_tree[e] = True
        if elder[a] < elder[b]:
            a, b = b, a
        # a keeps the older vertex; b's component dies
        birth[npairs] = elder[b]
        death[npairs] = e
        npairs += 1
        parent[b] = a
    return birth[:npairs], death[:npairs], is_tree


@njit(**_JIT)
def _lookup(c, overflow, ap_cof):
    """Slot of the column paired with row ``c``: >= 0 overflow, <= -2 apparent, -1 absent."""
    if c in overflow:
        return overflow[c]
    lo = 0
    hi = ap_cof.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if ap_cof[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    if lo < ap_cof.shape[0] and ap_cof[lo] == c:
        return -2 - lo
    return -1


@njit(**_JIT)
def _pop_pivot(heap):
    """Remove cancelling duplicates and return the top entry without removing it."""
    while len(heap) > 0:
        top = heapq.heappop(heap)
        if len(heap) > 0 and heap[0] == top:
            heapq.heappop(heap)
            continue
        heapq.heappush(heap, top)
        return top
    return (np.inf, np.int64(1))


@njit(**_JIT)
def _push_coboundary(heap, idx, dim, diam, n, binom, M, thr, verts, buf_i, buf_d):
    decode(idx, dim, n, binom, verts)
    c = cofacets(idx, dim, diam, verts, n, binom, M, thr, 0, buf_i, buf_d)
    for q in range(c):
        heapq.heappush(heap, (buf_d[q], -buf_i[q]))


@njit(**_JIT)
def reduce_columns(col_idx, col_diam, dim, n, binom, M, thr,
                   ap_cof, ap_col, ap_diam, vmatrix, emergent):
    """Cohomology reduction of the non-apparent columns in coboundary order.

    Returns ``(pivot, pivot_diam, kind, additions)`` aligned with the columns.
    ``pivot`` is -1 for a column that reduces to zero; ``kind`` is 1 when the
    emergent shortcut fired and 0 otherwise.
    """
    m = col_idx.shape[0]
    pivot = np.full(m, -1, dtype=np.int64)
    pivot_diam = np.full(m, np.inf)
    kind = np.zeros(m, dtype=np.int8)
    overflow = Dict.empty(key_type=types.int64, value_type=types.int64)
    # reduced columns by slot: simplex and, in vmatrix mode, its V-column
    slot_idx = List.empty_list(types.int64)
    slot_diam = List.empty_list(types.float64)
    v_idx = List.empty_list(types.int64[::1])
    v_diam = List.empty_list(types.float64[::1])
    empty_i = np.empty(0, dtype=np.int64)
    empty_d = np.empty(0, dtype=np.float64)

    verts = np.empty(dim + 1, dtype=np.int64)
    buf_i = np.empty(n, dtype=np.int64)
    buf_d = np.empty(n, dtype=np.float64)
    heap = [(0.0, np.int64(0))]
    work_i = List.empty_list(types.int64)
    work_d = List.empty_list(types.float64)
    additions = 0

    for j in range(m):
        idx = col_idx[j]
        diam = col_diam[j]
        decode(idx, dim, n, binom, verts)
        if emergent:
            if cofacets(idx, dim, diam, verts, n, binom, M, thr, 1, buf_i, buf_d) == 1:
                c = buf_i[0]
                if _lookup(c, overflow, ap_cof) == -1:
                    pivot[j] = c
                    pivot_diam[j] = diam
                    kind[j] = 1
                    overflow[c] = len(slot_idx)
                    slot_idx.append(idx)
                    slot_diam.append(diam)
                    v_idx.append(empty_i)
                    v_diam.append(empty_d)
                    continue
        heap.clear()
        work_i.clear()
        work_d.clear()
        _push_coboundary(heap, idx, dim, diam, n, binom, M, thr, verts, buf_i, buf_d)
        while True:
            top = _pop_pivot(heap)
            if top[0] == np.inf:
                break
            c = -top[1]
            slot = _lookup(c, overflow, ap_cof)
            if slot == -1:
                pivot[j] = c
                pivot_diam[j] = top[0]
                overflow[c] = len(slot_idx)
                slot_idx.append(idx)
                slot_diam.append(diam)
                if vmatrix and len(work_i) > 0:
                    wi = np.empty(len(work_i), dtype=np.int64)
                    wd = np.empty(len(work_i), dtype=np.float64)
                    for q in range(len(work_i)):
                        wi[q] = work_i[q]
                        wd[q] = work_d[q]
                    order = np.argsort(wi, kind="mergesort")
                    wi = wi[order]
                    wd = wd[order]
                    keep = np.ones(wi.shape[0], dtype=np.bool_)
                    q = 0
                    while q < wi.shape[0]:
                        r = q
                        while r < wi.shape[0] and wi[r] == wi[q]:
                            r += 1
                        if (r - q) % 2 == 0:
                            keep[q:r] = False
                        else:
                            keep[q + 1:r] = False
                        q = r
                    v_idx.append(wi[keep].copy())
                    v_diam.append(wd[keep].copy())
                else:
                    v_idx.append(empty_i)
                    v_diam.append(empty_d)
                break
            additions += 1
            if slot >= 0:
                o_idx = slot_idx[slot]
                o_diam = slot_diam[slot]
            else:
                o_idx = ap_col[-2 - slot]
                o_diam = ap_diam[-2 - slot]
            _push_coboundary(heap, o_idx, dim, o_diam, n, binom, M, thr, verts, buf_i, buf_d)
            if vmatrix:
                work_i.append(o_idx)
                work_d.append(o_diam)
                if slot >= 0:
                    vi = v_idx[slot]
                    vd = v_diam[slot]
                    for q in range(vi.shape[0]):
                        _push_coboundary(heap, vi[q], dim, vd[q], n, binom, M, thr,
                                         verts, buf_i, buf_d)
                        work_i.append(vi[q])
                        work_d.append(vd[q])
    return pivot, pivot_diam, kind, additions
