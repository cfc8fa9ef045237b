import io
import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quotefam import corpus, metrics, subfam
from quotefam.exceptions import DomainError


def _qs(texts, counts):
    mentions = []
    for t, c in zip(texts, counts):
        mentions.extend([corpus.Mention(t)] * c)
    return corpus.aggregate(mentions, min_mentions=1)


def _family(texts, counts):
    qs = _qs(texts, counts)
    g = subfam.build_edit_graph([q.id for q in qs], [q.text for q in qs], max_edit=1)
    return qs, g


def test_term_stability_in_quote_hand_value():
    qs, g = _family(["a b c", "a b d", "a b"], [4, 2, 2])
    qid = next(q.id for q in qs if q.text == "a b c")
    nb = subfam.neighborhood(g, qid)
    # Neighborhood is all three quotes; "c" only in the center (weight 4 of 8).
    assert metrics.term_stability_in_quote("c", qid, nb, qs) == pytest.approx(0.5)
    assert metrics.term_stability_in_quote("a", qid, nb, qs) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        metrics.term_stability_in_quote("zzz", qid, nb, qs)


def test_term_stability_normalized_average():
    records = [(1.0, 3.0), (0.5, 1.0)]
    assert metrics.term_stability(records) == pytest.approx(3.5 / 4.0)
    with pytest.raises(DomainError):
        metrics.term_stability([])


def test_quote_stability_share_and_isolated():
    qs, g = _family(["a b c", "a b d", "x y z w v"], [4, 4, 2])
    qid = next(q.id for q in qs if q.text == "a b c")
    nb = subfam.neighborhood(g, qid)
    assert metrics.quote_stability(qid, nb, qs) == pytest.approx(0.5)
    iso = next(q.id for q in qs if q.text.startswith("x"))
    nb_iso = subfam.neighborhood(g, iso)
    assert metrics.quote_stability(iso, nb_iso, qs) == 1.0


def test_entropy_values():
    assert metrics.entropy([5]) == 0.0
    assert metrics.entropy([1, 1]) == pytest.approx(math.log(2))
    assert metrics.entropy([1, 1, 0]) == pytest.approx(math.log(2))
    with pytest.raises(DomainError):
        metrics.entropy([])


mention_groups = st.lists(
    st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=6),
    min_size=1,
    max_size=6,
)


@given(mention_groups)
def test_entropy_grouping_identity(groups):
    h_family, h_shares, h_within = metrics.family_entropy_decomposition(groups)
    assert abs(h_family - h_shares - h_within) < 1e-9


@given(mention_groups)
def test_stability_bounds(groups):
    # s and S stay in [0, 1] on arbitrary synthetic families.
    texts = []
    counts = []
    base = 0
    for g in groups:
        for k, c in enumerate(g):
            texts.append(" ".join(f"w{base}g{j}" for j in range(3)) + f" v{k}")
            counts.append(c)
        base += 1
    # de-duplicate: aggregate collapses equal texts
    qs = _qs(texts, counts)
    g = subfam.build_edit_graph([q.id for q in qs], [q.text for q in qs], max_edit=1)
    terms, quote_s = metrics.stability_records(qs, [g])
    for rows in terms.values():
        for s, w in rows:
            assert 0.0 <= s <= 1.0
        assert 0.0 <= metrics.term_stability(rows) <= 1.0
    for s in quote_s.values():
        assert 0.0 <= s <= 1.0


def test_feature_stability_weighted_means():
    rows = [("noun", 1.0, 2.0), ("noun", 0.0, 2.0), ("verb", 0.5, 1.0)]
    out = metrics.feature_stability(rows)
    assert out["noun"] == pytest.approx(0.5)
    assert out["verb"] == pytest.approx(0.5)


def test_bin_quantiles_populations_and_means():
    rng = random.Random(3)
    points = [(float(i), rng.random(), 1.0) for i in range(103)]
    curve = metrics.bin_quantiles(points, 10)
    sizes = [b.n_points for b in curve.bins]
    assert sum(sizes) == 103
    assert max(sizes) - min(sizes) <= 1
    # remainder goes to the first bins
    assert sizes == sorted(sizes, reverse=True)
    # x means are non-decreasing across contiguous bins
    xs = [b.x_mean for b in curve.bins]
    assert xs == sorted(xs)


def test_bin_quantiles_ci_hand_value():
    points = [(0.0, 1.0, 1.0), (1.0, 3.0, 1.0)]
    curve = metrics.bin_quantiles(points, 1)
    b = curve.bins[0]
    assert b.y == pytest.approx(2.0)
    se = math.sqrt(1.0 + 1.0) / 2.0
    assert b.ci_high - b.y == pytest.approx(1.959963984540054 * se)
    assert b.y - b.ci_low == pytest.approx(1.959963984540054 * se)


def test_bin_quantiles_weighted_mean():
    points = [(0.0, 0.0, 3.0), (1.0, 1.0, 1.0)]
    b = metrics.bin_quantiles(points, 1).bins[0]
    assert b.y == pytest.approx(0.25)


def test_bin_quantiles_validation():
    with pytest.raises(DomainError):
        metrics.bin_quantiles([(0.0, 0.0, 1.0)], 2)
    with pytest.raises(DomainError):
        metrics.bin_quantiles([(0.0, 0.0, 1.0)], 0)


def test_write_curve_format():
    curve = metrics.bin_quantiles([(0.0, 0.5, 1.0), (1.0, 0.7, 1.0)], 2)
    buf = io.StringIO()
    metrics.write_curve(curve, buf, header="# produced-by=test config=x")
    lines = buf.getvalue().splitlines()
    assert lines[1] == "x_mean,y,ci_low,ci_high,n"
    assert len(lines) == 4
    assert lines[2].split(",")[4] == "1"
