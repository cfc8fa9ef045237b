"""Intra-family token edit-distance graph, sub-families and neighborhoods.

Edit distances here operate on raw canonicalized quote text split on
whitespace (punctuation attached, no lemmatization or stop-word removal).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import DomainError


def token_edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein over whitespace tokens."""
    ta = a.split()
    tb = b.split()
    n1, n2 = len(ta), len(tb)
    if n1 == 0:
        return n2
    if n2 == 0:
        return n1
    prev = list(range(n1 + 1))
    for j in range(1, n2 + 1):
        cur = [j] + [0] * n1
        for i in range(1, n1 + 1):
            cost = 0 if ta[i - 1] == tb[j - 1] else 1
            cur[i] = min(prev[i - 1] + cost, prev[i] + 1, cur[i - 1] + 1)
        prev = cur
    return prev[n1]


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class EditGraph:
    """Unweighted graph over one family's quotes at token edit distance <= max_edit."""

    quote_ids: tuple[int, ...]
    max_edit: int
    adjacency: dict[int, tuple[int, ...]]   # quote id -> adjacent quote ids

    def __contains__(self, quote_id: int) -> bool:
        return quote_id in self.adjacency


@dataclass(frozen=True)
class SubFamily:
    id: int
    quote_ids: tuple[int, ...]
    total_mentions: int


@dataclass(frozen=True)
class Neighborhood:
    center: int
    quote_ids: tuple[int, ...]   # includes the center


def _token_arrays(texts: list[str]) -> list[np.ndarray]:
    vocab: dict[str, int] = {}
    out = []
    for text in texts:
        ids = []
        for tok in text.split():
            ids.append(vocab.setdefault(tok, len(vocab)))
        out.append(np.asarray(ids, dtype=np.int64))
    return out


def build_edit_graph(
    quote_ids: list[int] | tuple[int, ...],
    texts: list[str],
    max_edit: int = 1,
) -> EditGraph:
    """Edge iff token edit distance <= max_edit; computation short-circuits
    via banded DP when the length difference already exceeds max_edit."""
    if max_edit < 1:
        raise DomainError("max_edit must be >= 1")
    if len(quote_ids) != len(texts):
        raise DomainError("quote_ids and texts must align")
    arrays = _token_arrays(texts)
    n = len(arrays)
    adj: dict[int, list[int]] = {qid: [] for qid in quote_ids}
    for i in range(n):
        for j in range(i + 1, n):
            if abs(arrays[i].shape[0] - arrays[j].shape[0]) > max_edit:
                continue
            d = _kernels.unit_edit_distance_banded(arrays[i], arrays[j], max_edit)
            if d <= max_edit:
                adj[quote_ids[i]].append(quote_ids[j])
                adj[quote_ids[j]].append(quote_ids[i])
    return EditGraph(
        quote_ids=tuple(quote_ids),
        max_edit=max_edit,
        adjacency={qid: tuple(sorted(nbrs)) for qid, nbrs in adj.items()},
    )


def subfamilies(
    g: EditGraph, mentions: dict[int, int] | None = None
) -> tuple[SubFamily, ...]:
    """Connected components of the edit graph, ids keyed to smallest member."""
    order = {qid: k for k, qid in enumerate(g.quote_ids)}
    uf = UnionFind(len(g.quote_ids))
    for qid, nbrs in g.adjacency.items():
        for other in nbrs:
            uf.union(order[qid], order[other])
    groups: dict[int, list[int]] = {}
    for qid in g.quote_ids:
        groups.setdefault(uf.find(order[qid]), []).append(qid)
    comps = sorted((sorted(members) for members in groups.values()), key=lambda m: m[0])
    out = []
    for members in comps:
        total = sum(mentions[qid] for qid in members) if mentions else len(members)
        out.append(
            SubFamily(id=members[0], quote_ids=tuple(members), total_mentions=total)
        )
    return tuple(out)


def neighborhood(g: EditGraph, quote_id: int) -> Neighborhood:
    """V_q: the quote itself plus its edit-graph neighbors within the family."""
    if quote_id not in g.adjacency:
        raise DomainError(f"quote {quote_id} not in edit graph")
    members = tuple(sorted({quote_id, *g.adjacency[quote_id]}))
    return Neighborhood(center=quote_id, quote_ids=members)
