"""Scikit-learn style estimator facade over the family detection pipeline.

``FamilyClusterer.fit`` accepts raw quote texts (optionally with mention
counts) and exposes family and sub-family labels, so the pipeline composes
with the wider sklearn ecosystem (``get_params`` / ``set_params`` / clone).
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from . import communities, simgraph, subfam, textprep
from .corpus import Mention, QuoteSet, aggregate


def _as_quoteset(X, min_mentions: int) -> QuoteSet:
    mentions = []
    for row in X:
        if isinstance(row, str):
            text, count = row, 1
        else:
            text, count = row
        mentions.extend([Mention(text)] * int(count))
    return aggregate(mentions, min_mentions=min_mentions)


class FamilyClusterer(ClusterMixin, BaseEstimator):
    """Cluster near-duplicate quotes into families and sub-families.

    Parameters mirror the pipeline defaults: the similarity threshold on
    1 - L, the minimum shared full words for candidate pairs, the mention
    floor for a quote to enter the corpus, the optional short/foreign quote
    filter, and the token edit radius of sub-families.
    """

    def __init__(
        self,
        threshold: float = 0.35,
        min_shared_words: int = 2,
        min_mentions: int = 1,
        min_words: int = 0,
        english_check: bool = False,
        max_edit: int = 1,
        seed: int = 0,
    ):
        self.threshold = threshold
        self.min_shared_words = min_shared_words
        self.min_mentions = min_mentions
        self.min_words = min_words
        self.english_check = english_check
        self.max_edit = max_edit
        self.seed = seed

    def fit(self, X, y=None):
        """X: iterable of quote texts or (text, mention_count) pairs."""
        X = list(X)
        if not X:
            raise ValueError("FamilyClusterer requires at least one quote")
        qs = _as_quoteset(X, self.min_mentions)
        index = textprep.build_index(qs)
        graph = simgraph.build_graph(
            qs, index, threshold=self.threshold, min_shared=self.min_shared_words
        )
        partition = communities.detect_families(graph, seed=self.seed)
        families = communities.families_from_partition(partition, qs)
        if self.min_words or self.english_check:
            families = communities.filter_families(
                families,
                qs,
                min_words=self.min_words,
                english_check=self.english_check,
            )
        sub_labels: dict[int, int] = {}
        for fam in families:
            texts = [qs[qid].text for qid in fam.quote_ids]
            g = subfam.build_edit_graph(
                list(fam.quote_ids), texts, max_edit=self.max_edit
            )
            for sf in subfam.subfamilies(g):
                for qid in sf.quote_ids:
                    sub_labels[qid] = sf.id

        self.quoteset_ = qs
        self.index_ = index
        self.graph_ = graph
        self.partition_ = partition
        self.families_ = families
        kept = {qid for fam in families for qid in fam.quote_ids}
        self.labels_ = [
            partition.assignment[q.id] if q.id in kept else -1 for q in qs
        ]
        self.subfamily_labels_ = [sub_labels.get(q.id, -1) for q in qs]
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def texts_(self):
        check_is_fitted(self, "quoteset_")
        return [q.text for q in self.quoteset_]
