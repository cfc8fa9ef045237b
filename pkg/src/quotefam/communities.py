"""Quotation family detection by two-level map-equation minimization.

The codelength of a partition M is

    L(M) = plogp(q_tot) - 2 * sum_i plogp(q_i) + sum_i plogp(q_i + p_i)
           - sum_a plogp(p_a)

(natural log, plogp(x) = x ln x) where p_a is the stationary visit rate of
node a under the edge-weight-proportional random walk (weighted degree over
twice the total edge weight, no teleportation), p_i the total visit rate of
module i and q_i its exit probability (cross-edge weight over twice the
total weight).  The optimizer performs Louvain-style greedy node moves with
module aggregation and recursion, independently per connected component,
with the node visit order drawn from the given seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import _wordlists
from .corpus import QuoteSet
from .exceptions import DomainError
from .simgraph import SimilarityGraph
from .subfam import UnionFind
from .textprep import tokenize

#: Minimum fraction of tokens found in the English word list for a quote to
#: pass the heuristic language test.
ENGLISH_FRACTION = 0.40


def _plogp(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


@dataclass(frozen=True)
class Partition:
    assignment: dict[int, int]     # node -> family id
    codelength: float


@dataclass(frozen=True)
class Family:
    id: int
    quote_ids: tuple[int, ...]
    total_mentions: int
    n_versions: int


def map_equation(graph: SimilarityGraph, assignment: dict[int, int]) -> float:
    """Two-level map-equation codelength (nats) of a full node assignment."""
    for node in range(graph.n_nodes):
        if node not in assignment:
            raise DomainError(f"node {node} missing from assignment")
    k = graph.degree_weights()
    total = k.sum()
    if total == 0.0:
        return 0.0
    p = k / total          # total = 2W
    cut: dict[int, float] = {}
    vol: dict[int, float] = {}
    for node in range(graph.n_nodes):
        m = assignment[node]
        vol[m] = vol.get(m, 0.0) + p[node]
        cut.setdefault(m, 0.0)
    for (i, j), w in graph.edges.items():
        if assignment[i] != assignment[j]:
            q = w / total
            cut[assignment[i]] += q
            cut[assignment[j]] += q
    q_tot = sum(cut.values())
    L = _plogp(q_tot) - sum(_plogp(p[a]) for a in range(graph.n_nodes))
    for m in vol:
        L += _plogp(cut[m] + vol[m]) - 2.0 * _plogp(cut[m])
    return L


class _Level:
    """One aggregation level: supernodes with explicit visit rates."""

    def __init__(self, n, p, adj):
        self.n = n
        self.p = p                  # visit rate per supernode
        self.adj = adj              # node -> list of (nbr, weight in p units)

    @classmethod
    def from_graph(cls, graph: SimilarityGraph, nodes: list[int]):
        total = graph.degree_weights().sum()
        index = {node: k for k, node in enumerate(nodes)}
        adj: list[list[tuple[int, float]]] = [[] for _ in nodes]
        p = [0.0] * len(nodes)
        for (i, j), w in graph.edges.items():
            if i in index and j in index:
                q = w / total
                adj[index[i]].append((index[j], q))
                adj[index[j]].append((index[i], q))
                p[index[i]] += q
                p[index[j]] += q
        return cls(len(nodes), p, adj)


def _greedy_level(level: _Level, rng: random.Random):
    """One Louvain pass sequence: returns (module of each node, improved?)."""
    n = level.n
    module = list(range(n))
    mod_p = list(level.p)
    # Module cut in p units; initially every edge is a cut edge.
    mod_cut = [0.0] * n
    for a in range(n):
        for b, q in level.adj[a]:
            if b != a:
                mod_cut[a] += q
    q_tot = sum(mod_cut)

    def term(m):
        return _plogp(mod_cut[m] + mod_p[m]) - 2.0 * _plogp(mod_cut[m])

    improved_any = False
    improved = True
    while improved:
        improved = False
        order = list(range(n))
        rng.shuffle(order)
        for a in order:
            src = module[a]
            # Weight from a to each adjacent module (and to own module).
            w_to: dict[int, float] = {}
            k_a = 0.0
            for b, q in level.adj[a]:
                if b == a:
                    continue
                k_a += q
                w_to[module[b]] = w_to.get(module[b], 0.0) + q
            if not w_to:
                continue
            w_src = w_to.get(src, 0.0)
            base = _plogp(q_tot) + term(src)
            # State with a removed from src.
            src_cut_out = mod_cut[src] - k_a + 2.0 * w_src
            src_p_out = mod_p[src] - level.p[a]
            q_out = q_tot - k_a + 2.0 * w_src
            best_gain = 0.0
            best_dst = None
            for dst, w_dst in w_to.items():
                if dst == src:
                    continue
                dst_cut_new = mod_cut[dst] + k_a - 2.0 * w_dst
                dst_p_new = mod_p[dst] + level.p[a]
                q_new = q_out + k_a - 2.0 * w_dst
                before = base + term(dst)
                after = (
                    _plogp(q_new)
                    + _plogp(src_cut_out + src_p_out) - 2.0 * _plogp(src_cut_out)
                    + _plogp(dst_cut_new + dst_p_new) - 2.0 * _plogp(dst_cut_new)
                )
                gain = before - after
                if gain > best_gain + 1e-13:
                    best_gain = gain
                    best_dst = dst
            if best_dst is not None:
                w_dst = w_to.get(best_dst, 0.0)
                q_tot = q_out + k_a - 2.0 * w_dst
                mod_cut[src] = src_cut_out
                mod_p[src] = src_p_out
                mod_cut[best_dst] += k_a - 2.0 * w_dst
                mod_p[best_dst] += level.p[a]
                module[a] = best_dst
                improved = True
                improved_any = True
    return module, improved_any


def _aggregate(level: _Level, module: list[int]) -> tuple[_Level, list[int]]:
    mods = sorted(set(module))
    remap = {m: k for k, m in enumerate(mods)}
    labels = [remap[m] for m in module]
    p = [0.0] * len(mods)
    for a in range(level.n):
        p[labels[a]] += level.p[a]
    agg: list[dict[int, float]] = [dict() for _ in mods]
    for a in range(level.n):
        for b, q in level.adj[a]:
            if b < a:
                continue
            ma, mb = labels[a], labels[b]
            agg[ma][mb] = agg[ma].get(mb, 0.0) + q
    adj: list[list[tuple[int, float]]] = [[] for _ in mods]
    for ma, row in enumerate(agg):
        for mb, q in row.items():
            if ma == mb:
                adj[ma].append((ma, q))   # self loop keeps p bookkeeping intact
            else:
                adj[ma].append((mb, q))
                adj[mb].append((ma, q))
    return _Level(len(mods), p, adj), labels


def _optimize_component(level: _Level, rng: random.Random) -> list[int]:
    assignment = list(range(level.n))
    while True:
        module, improved = _greedy_level(level, rng)
        if not improved:
            break
        level, labels = _aggregate(level, module)
        assignment = [labels[s] for s in assignment]
        if level.n <= 1:
            break
    return assignment


def detect_families(graph: SimilarityGraph, seed: int = 0, trials: int = 8) -> Partition:
    """Greedy codelength minimization, deterministic given the seed.

    Runs per connected component with several restart trials, keeping the
    assignment with the lowest codelength.  Isolated nodes become singleton
    families.
    """
    uf = UnionFind(graph.n_nodes)
    for (i, j) in graph.edges:
        uf.union(i, j)
    comps: dict[int, list[int]] = {}
    for node in range(graph.n_nodes):
        comps.setdefault(uf.find(node), []).append(node)

    assignment: dict[int, int] = {}
    next_family = 0
    for root in sorted(comps):
        nodes = sorted(comps[root])
        if len(nodes) == 1:
            assignment[nodes[0]] = next_family
            next_family += 1
            continue
        level = _Level.from_graph(graph, nodes)
        best_labels = None
        best_len = math.inf
        for t in range(trials):
            rng = random.Random(1_000_003 * seed + 1009 * root + t)
            labels = _optimize_component(level, rng)
            # Codelength contributed by this component alone decides the winner.
            cl = _component_codelength(graph, nodes, labels)
            if cl < best_len - 1e-13:
                best_len = cl
                best_labels = labels
        remap: dict[int, int] = {}
        for node, lab in zip(nodes, best_labels):
            if lab not in remap:
                remap[lab] = next_family
                next_family += 1
            assignment[node] = remap[lab]
    return Partition(assignment=assignment, codelength=map_equation(graph, assignment))


def _component_codelength(graph: SimilarityGraph, nodes: list[int], labels) -> float:
    """Map-equation terms contributed by one component's modules."""
    k = graph.degree_weights()
    total = k.sum()
    if total == 0.0:
        return 0.0
    index = {node: i for i, node in enumerate(nodes)}
    n_mod = max(labels) + 1
    vol = [0.0] * n_mod
    cut = [0.0] * n_mod
    for node in nodes:
        vol[labels[index[node]]] += k[node] / total
    for (i, j), w in graph.edges.items():
        if i in index and j in index and labels[index[i]] != labels[index[j]]:
            cut[labels[index[i]]] += w / total
            cut[labels[index[j]]] += w / total
    q_tot = sum(cut)
    L = _plogp(q_tot)
    for m in range(n_mod):
        L += _plogp(cut[m] + vol[m]) - 2.0 * _plogp(cut[m])
    return L


def families_from_partition(partition: Partition, qs: QuoteSet) -> tuple[Family, ...]:
    groups: dict[int, list[int]] = {}
    for node, fam in partition.assignment.items():
        groups.setdefault(fam, []).append(node)
    out = []
    for fam_id in sorted(groups):
        members = tuple(sorted(groups[fam_id]))
        out.append(
            Family(
                id=fam_id,
                quote_ids=members,
                total_mentions=sum(qs[m].mentions for m in members),
                n_versions=len(members),
            )
        )
    return tuple(out)


def is_english(text: str, wordlist: frozenset[str] | None = None) -> bool:
    """Heuristic language test: enough tokens found in the English word list."""
    words = wordlist if wordlist is not None else _wordlists.ENGLISH_WORDS
    tokens = tokenize(text)
    if not tokens:
        return False
    hits = sum(1 for t in tokens if t in words)
    return hits / len(tokens) >= ENGLISH_FRACTION


def filter_families(
    families: tuple[Family, ...],
    qs: QuoteSet,
    min_words: int = 5,
    english_check: bool = True,
    wordlist: frozenset[str] | None = None,
) -> tuple[Family, ...]:
    """Drop quotes failing the word-count or language test, then empty families."""
    out = []
    for fam in families:
        kept = []
        for qid in fam.quote_ids:
            text = qs[qid].text
            if len(text.split()) < min_words:
                continue
            if english_check and not is_english(text, wordlist):
                continue
            kept.append(qid)
        if kept:
            out.append(
                Family(
                    id=fam.id,
                    quote_ids=tuple(kept),
                    total_mentions=sum(qs[m].mentions for m in kept),
                    n_versions=len(kept),
                )
            )
    return tuple(out)
