"""tf*idf-weighted Levenshtein dissimilarity and the thresholded similarity graph.

The public scoring functions are pure Python and define the canonical
semantics (minimum-unit-cost edit path with match > substitute > delete >
insert tie-breaking from the sequence ends, inputs ordered lexicographically).
:func:`build_graph` runs the same computation through numba kernels so that
corpus-scale construction stays fast; the two paths are cross-checked in the
test suite.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .corpus import QuoteSet
from .exceptions import DomainError
from .textprep import TfIdfIndex

DEFAULT_THRESHOLD = 0.35
DEFAULT_MIN_SHARED = 2


@dataclass(frozen=True)
class EditStep:
    kind: str                      # match | substitute | insert | delete
    term_a: str | None
    term_b: str | None
    weight: float


@dataclass(frozen=True)
class EditPath:
    steps: tuple[EditStep, ...]

    @property
    def cost(self) -> int:
        """Classic unit-cost Levenshtein distance."""
        return sum(1 for s in self.steps if s.kind != "match")

    @property
    def ratio(self) -> float:
        den = sum(s.weight for s in self.steps)
        if den == 0.0:
            return 0.0
        return sum(s.weight for s in self.steps if s.kind != "match") / den


@dataclass
class SimilarityGraph:
    """Undirected weighted graph over quote ids 0..n-1."""

    n_nodes: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)

    def add_edge(self, i: int, j: int, weight: float) -> None:
        if i == j:
            raise DomainError("self loops are not allowed")
        key = (i, j) if i < j else (j, i)
        self.edges[key] = weight

    def weight(self, i: int, j: int) -> float | None:
        return self.edges.get((i, j) if i < j else (j, i))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
        for (i, j), w in self.edges.items():
            adj[i].append((j, w))
            adj[j].append((i, w))
        return adj

    def degree_weights(self) -> np.ndarray:
        k = np.zeros(self.n_nodes)
        for (i, j), w in self.edges.items():
            k[i] += w
            k[j] += w
        return k


def candidate_pairs(
    qs: QuoteSet,
    index: TfIdfIndex | None = None,
    min_shared: int = DEFAULT_MIN_SHARED,
) -> Iterator[tuple[int, int]]:
    """Yield unordered quote-id pairs sharing >= min_shared distinct full
    surface words, via an inverted index (disjoint pairs never enumerated)."""
    if min_shared < 1:
        raise DomainError("min_shared must be >= 1")
    if index is not None:
        surface = index.surface
    else:
        from .textprep import tokenize
        surface = [tokenize(q.text) for q in qs]
    postings: dict[str, list[int]] = {}
    for qid, seq in enumerate(surface):
        for term in set(seq):
            postings.setdefault(term, []).append(qid)
    shared: Counter[tuple[int, int]] = Counter()
    for qids in postings.values():
        for a in range(len(qids)):
            for b in range(a + 1, len(qids)):
                shared[(qids[a], qids[b])] += 1
    for pair in sorted(shared):
        if shared[pair] >= min_shared:
            yield pair


def _seq_weights(seq: Sequence[str], weight_of: Mapping[str, float]) -> list[float]:
    counts = Counter(seq)
    return [counts[t] * weight_of[t] for t in seq]


def edit_path(
    a: Sequence[str],
    b: Sequence[str],
    weights_a: Mapping[str, float],
    weights_b: Mapping[str, float],
) -> EditPath:
    """Canonical minimum-unit-cost edit path between two token sequences.

    ``weights_a[t]`` / ``weights_b[t]`` are the per-term idf weights in each
    sequence's home quote; per-occurrence f values are tf * idf.  Inputs are
    ordered lexicographically before alignment, so the result is symmetric.
    """
    if len(a) == 0 and len(b) == 0:
        raise DomainError("edit ratio of two empty sequences is undefined")
    swapped = tuple(b) < tuple(a)
    if swapped:
        a, b = b, a
        weights_a, weights_b = weights_b, weights_a
    wa = _seq_weights(a, weights_a)
    wb = _seq_weights(b, weights_b)
    n1, n2 = len(a), len(b)
    D = [[0] * (n2 + 1) for _ in range(n1 + 1)]
    for i in range(n1 + 1):
        D[i][0] = i
    for j in range(n2 + 1):
        D[0][j] = j
    for i in range(1, n1 + 1):
        for j in range(1, n2 + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            D[i][j] = min(D[i - 1][j - 1] + cost, D[i - 1][j] + 1, D[i][j - 1] + 1)
    steps: list[EditStep] = []
    i, j = n1, n2
    while i > 0 or j > 0:
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and D[i - 1][j - 1] == D[i][j]:
            steps.append(EditStep("match", a[i - 1], b[j - 1], max(wa[i - 1], wb[j - 1])))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and a[i - 1] != b[j - 1] and D[i - 1][j - 1] + 1 == D[i][j]:
            steps.append(
                EditStep("substitute", a[i - 1], b[j - 1], max(wa[i - 1], wb[j - 1]))
            )
            i, j = i - 1, j - 1
        elif i > 0 and D[i - 1][j] + 1 == D[i][j]:
            steps.append(EditStep("delete", a[i - 1], None, wa[i - 1]))
            i -= 1
        else:
            steps.append(EditStep("insert", None, b[j - 1], wb[j - 1]))
            j -= 1
    steps.reverse()
    if swapped:
        flip = {"delete": "insert", "insert": "delete"}
        steps = [
            EditStep(flip.get(s.kind, s.kind), s.term_b, s.term_a, s.weight)
            for s in steps
        ]
    return EditPath(tuple(steps))


def weighted_edit_ratio(
    a: Sequence[str],
    b: Sequence[str],
    weights_a: Mapping[str, float],
    weights_b: Mapping[str, float],
) -> float:
    """Weighted mismatch ratio L in [0, 1] along the canonical minimum path."""
    return edit_path(a, b, weights_a, weights_b).ratio


def _index_weights(seq: Sequence[str], index: TfIdfIndex) -> dict[str, float]:
    out = {}
    for term in set(seq):
        out[term] = index.idf(term)
    return out


def weighted_levenshtein(a: Sequence[str], b: Sequence[str], index: TfIdfIndex) -> float:
    """L(a, b) with tf*idf weights drawn from ``index`` (tf = in-sequence count)."""
    return weighted_edit_ratio(a, b, _index_weights(a, index), _index_weights(b, index))


def _corpus_arrays(qs: QuoteSet, index: TfIdfIndex):
    """Flatten index contents into the CSR arrays consumed by the kernels."""
    n = len(qs)
    surf_vocab: dict[str, int] = {}
    s_lists = []
    for seq in index.surface:
        uniq = sorted(set(seq))
        ids = []
        for t in uniq:
            tid = surf_vocab.setdefault(t, len(surf_vocab))
            ids.append(tid)
        ids.sort()
        s_lists.append(ids)
    s_indptr = np.zeros(n + 1, dtype=np.int64)
    for i, ids in enumerate(s_lists):
        s_indptr[i + 1] = s_indptr[i] + len(ids)
    s_terms = np.fromiter(
        (t for ids in s_lists for t in ids), dtype=np.int64, count=s_indptr[-1]
    )
    # Inverted index: surface term -> ascending quote ids.
    n_terms = len(surf_vocab)
    p_counts = np.zeros(n_terms + 1, dtype=np.int64)
    for ids in s_lists:
        for t in ids:
            p_counts[t + 1] += 1
    p_indptr = np.cumsum(p_counts)
    p_quotes = np.empty(s_indptr[-1], dtype=np.int64)
    cursor = p_indptr[:-1].copy()
    for qid, ids in enumerate(s_lists):
        for t in ids:
            p_quotes[cursor[t]] = qid
            cursor[t] += 1

    idf = np.log(index.n_quotes / np.asarray(index.doc_freq, dtype=np.float64))
    nseq_indptr = np.zeros(n + 1, dtype=np.int64)
    for i, seq in enumerate(index.normalized):
        nseq_indptr[i + 1] = nseq_indptr[i] + len(seq)
    nseq_toks = np.empty(nseq_indptr[-1], dtype=np.int64)
    nseq_w = np.empty(nseq_indptr[-1], dtype=np.float64)
    u_lists = []
    for i, seq in enumerate(index.normalized):
        counts = Counter(seq)
        base = nseq_indptr[i]
        for k, term in enumerate(seq):
            tid = index.term_id[term]
            nseq_toks[base + k] = tid
            nseq_w[base + k] = counts[term] * idf[tid]
        uniq = sorted((index.term_id[t], c) for t, c in counts.items())
        u_lists.append(uniq)
    u_indptr = np.zeros(n + 1, dtype=np.int64)
    for i, uniq in enumerate(u_lists):
        u_indptr[i + 1] = u_indptr[i] + len(uniq)
    u_terms = np.empty(u_indptr[-1], dtype=np.int64)
    u_counts = np.empty(u_indptr[-1], dtype=np.int64)
    u_w = np.empty(u_indptr[-1], dtype=np.float64)
    pos = 0
    for uniq in u_lists:
        for tid, c in uniq:
            u_terms[pos] = tid
            u_counts[pos] = c
            u_w[pos] = c * idf[tid]
            pos += 1
    return (
        s_indptr, s_terms, p_indptr, p_quotes,
        nseq_indptr, nseq_toks, nseq_w,
        u_indptr, u_terms, u_counts, u_w,
    )


def build_graph(
    qs: QuoteSet,
    index: TfIdfIndex,
    threshold: float = DEFAULT_THRESHOLD,
    min_shared: int = DEFAULT_MIN_SHARED,
) -> SimilarityGraph:
    """Assemble the similarity graph: edge iff the pair shares >= min_shared
    full words and 1 - L is strictly greater than the threshold."""
    if not 0.0 < threshold < 1.0:
        raise DomainError("threshold must lie strictly between 0 and 1")
    if min_shared < 1:
        raise DomainError("min_shared must be >= 1")
    graph = SimilarityGraph(n_nodes=len(qs))
    if len(qs) < 2:
        return graph
    arrays = _corpus_arrays(qs, index)
    e_i, e_j, e_w, _ = _kernels.build_edges(
        len(qs), *arrays, min_shared, threshold
    )
    for i, j, w in zip(e_i, e_j, e_w):
        graph.add_edge(int(i), int(j), float(w))
    return graph


def write_edge_list(graph: SimilarityGraph, writer, header: str | None = None) -> None:
    """Dump edges as TSV ``id1<TAB>id2<TAB>weight`` with 6-decimal weights."""
    if header:
        writer.write(header if header.endswith("\n") else header + "\n")
    for (i, j) in sorted(graph.edges):
        writer.write(f"{i}\t{j}\t{graph.edges[(i, j)]:.6f}\n")
