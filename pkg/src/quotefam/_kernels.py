"""Numba kernels for candidate enumeration and weighted edit scoring.

These back :func:`quotefam.simgraph.build_graph` at corpus scale.  The pure
Python implementations in :mod:`quotefam.simgraph` define the semantics; the
kernels must agree with them exactly (cross-checked in the test suite).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _lex_less(a, b):
    """Lexicographic comparison of two int arrays."""
    n = min(a.shape[0], b.shape[0])
    for k in range(n):
        if a[k] != b[k]:
            return a[k] < b[k]
    return a.shape[0] < b.shape[0]


@njit(cache=True)
def _weighted_ratio(a, b, wa, wb):
    """Weighted mismatch ratio along the canonical minimum edit path.

    Tie-breaking prefers match > substitute > delete > insert during the
    backtrace from the sequence ends; inputs must already be in canonical
    (lexicographic) order.
    """
    n1 = a.shape[0]
    n2 = b.shape[0]
    D = np.empty((n1 + 1, n2 + 1), dtype=np.int32)
    for i in range(n1 + 1):
        D[i, 0] = i
    for j in range(n2 + 1):
        D[0, j] = j
    for i in range(1, n1 + 1):
        for j in range(1, n2 + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = D[i - 1, j - 1] + cost
            if D[i - 1, j] + 1 < best:
                best = D[i - 1, j] + 1
            if D[i, j - 1] + 1 < best:
                best = D[i, j - 1] + 1
            D[i, j] = best
    num = 0.0
    den = 0.0
    i = n1
    j = n2
    while i > 0 or j > 0:
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and D[i - 1, j - 1] == D[i, j]:
            f = max(wa[i - 1], wb[j - 1])
            den += f
            i -= 1
            j -= 1
        elif (
            i > 0 and j > 0 and a[i - 1] != b[j - 1]
            and D[i - 1, j - 1] + 1 == D[i, j]
        ):
            f = max(wa[i - 1], wb[j - 1])
            num += f
            den += f
            i -= 1
            j -= 1
        elif i > 0 and D[i - 1, j] + 1 == D[i, j]:
            f = wa[i - 1]
            num += f
            den += f
            i -= 1
        else:
            f = wb[j - 1]
            num += f
            den += f
            j -= 1
    if den == 0.0:
        return 0.0
    return num / den


@njit(cache=True)
def _similarity_upper_bound(ut1, uc1, uw1, ut2, uc2, uw2):
    """Bag-of-words upper bound on 1 - L for a pair of normalized quotes.

    Arguments are per-quote sorted-unique term ids with occurrence counts
    and per-term weights.  Valid for any edit path: matched weight cannot
    exceed the shared-term bound and mismatch weight cannot fall below the
    unmatched-occurrence bound of either side.
    """
    m_max = 0.0
    u1 = 0.0
    u2 = 0.0
    i = 0
    j = 0
    while i < ut1.shape[0] and j < ut2.shape[0]:
        if ut1[i] == ut2[j]:
            m = min(uc1[i], uc2[j])
            wmax = max(uw1[i], uw2[j])
            m_max += m * wmax
            u1 += uw1[i] * (uc1[i] - m)
            u2 += uw2[j] * (uc2[j] - m)
            i += 1
            j += 1
        elif ut1[i] < ut2[j]:
            u1 += uw1[i] * uc1[i]
            i += 1
        else:
            u2 += uw2[j] * uc2[j]
            j += 1
    while i < ut1.shape[0]:
        u1 += uw1[i] * uc1[i]
        i += 1
    while j < ut2.shape[0]:
        u2 += uw2[j] * uc2[j]
        j += 1
    u_min = max(u1, u2)
    if m_max == 0.0:
        return 0.0
    return m_max / (m_max + u_min)


@njit(cache=True)
def build_edges(
    n,
    s_indptr, s_terms,            # sorted-unique surface term ids per quote
    p_indptr, p_quotes,           # inverted index: surface term -> quote ids
    nseq_indptr, nseq_toks, nseq_w,   # normalized sequences + per-pos weights
    u_indptr, u_terms, u_counts, u_w,  # sorted-unique normalized terms
    min_shared, threshold,
):
    """Stream candidate pairs (>= min_shared shared surface words) and score
    survivors of the similarity upper bound; returns thresholded edges."""
    n_terms = p_indptr.shape[0] - 1
    ptr = p_indptr[:-1].copy()      # per-term cursor past quotes <= current
    counts = np.zeros(n, dtype=np.int32)
    touched = np.empty(n, dtype=np.int64)
    cand = np.empty(n, dtype=np.int64)

    cap = 1024
    e_i = np.empty(cap, dtype=np.int64)
    e_j = np.empty(cap, dtype=np.int64)
    e_w = np.empty(cap, dtype=np.float64)
    n_edges = 0
    n_scored = 0

    for q in range(n):
        n_touched = 0
        n_cand = 0
        for s in range(s_indptr[q], s_indptr[q + 1]):
            t = s_terms[s]
            p = ptr[t]
            end = p_indptr[t + 1]
            while p < end and p_quotes[p] <= q:
                p += 1
            ptr[t] = p
            for k in range(p, end):
                q2 = p_quotes[k]
                c = counts[q2] + 1
                counts[q2] = c
                if c == 1:
                    touched[n_touched] = q2
                    n_touched += 1
                if c == min_shared:
                    cand[n_cand] = q2
                    n_cand += 1

        a = nseq_toks[nseq_indptr[q]:nseq_indptr[q + 1]]
        wa = nseq_w[nseq_indptr[q]:nseq_indptr[q + 1]]
        ut1 = u_terms[u_indptr[q]:u_indptr[q + 1]]
        uc1 = u_counts[u_indptr[q]:u_indptr[q + 1]]
        uw1 = u_w[u_indptr[q]:u_indptr[q + 1]]
        for k in range(n_cand):
            q2 = cand[k]
            if a.shape[0] == 0:
                continue
            b = nseq_toks[nseq_indptr[q2]:nseq_indptr[q2 + 1]]
            if b.shape[0] == 0:
                continue
            ub = _similarity_upper_bound(
                ut1, uc1, uw1,
                u_terms[u_indptr[q2]:u_indptr[q2 + 1]],
                u_counts[u_indptr[q2]:u_indptr[q2 + 1]],
                u_w[u_indptr[q2]:u_indptr[q2 + 1]],
            )
            if ub <= threshold:
                continue
            wb = nseq_w[nseq_indptr[q2]:nseq_indptr[q2 + 1]]
            n_scored += 1
            if _lex_less(b, a):
                ratio = _weighted_ratio(b, a, wb, wa)
            else:
                ratio = _weighted_ratio(a, b, wa, wb)
            sim = 1.0 - ratio
            if sim > threshold:
                if n_edges == cap:
                    cap *= 2
                    new_i = np.empty(cap, dtype=np.int64)
                    new_j = np.empty(cap, dtype=np.int64)
                    new_w = np.empty(cap, dtype=np.float64)
                    new_i[:n_edges] = e_i[:n_edges]
                    new_j[:n_edges] = e_j[:n_edges]
                    new_w[:n_edges] = e_w[:n_edges]
                    e_i, e_j, e_w = new_i, new_j, new_w
                e_i[n_edges] = q
                e_j[n_edges] = q2
                e_w[n_edges] = sim
                n_edges += 1

        for k in range(n_touched):
            counts[touched[k]] = 0

    return e_i[:n_edges], e_j[:n_edges], e_w[:n_edges], n_scored


@njit(cache=True)
def unit_edit_distance_banded(a, b, max_edit):
    """Unit-cost token Levenshtein with early exit above max_edit.

    Returns the exact distance when it is <= max_edit, else max_edit + 1.
    """
    n1 = a.shape[0]
    n2 = b.shape[0]
    if n1 > n2:
        a, b = b, a
        n1, n2 = n2, n1
    if n2 - n1 > max_edit:
        return max_edit + 1
    big = max_edit + 1
    prev = np.empty(n1 + 1, dtype=np.int32)
    cur = np.empty(n1 + 1, dtype=np.int32)
    for i in range(n1 + 1):
        prev[i] = i if i <= big else big
    for j in range(1, n2 + 1):
        cur[0] = j if j <= big else big
        lo = max(1, j - max_edit)
        hi = min(n1, j + max_edit)
        if lo > 1:
            cur[lo - 1] = big
        row_min = cur[0] if lo == 1 else big
        for i in range(lo, hi + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = prev[i - 1] + cost
            d = prev[i] + 1 if i <= j + max_edit - 1 else big
            if d < best:
                best = d
            d = cur[i - 1] + 1
            if d < best:
                best = d
            if best > big:
                best = big
            cur[i] = best
            if best < row_min:
                row_min = best
        for i in range(hi + 1, n1 + 1):
            cur[i] = big
        if row_min >= big:
            return big
        prev, cur = cur, prev
    return prev[n1] if prev[n1] <= max_edit else big
