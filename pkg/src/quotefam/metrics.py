"""Stability and diversity measures plus quantile-binned averaged curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import QuoteSet
from .exceptions import DomainError
from .subfam import EditGraph, Neighborhood, neighborhood

#: two-sided 95% normal quantile
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Bin:
    x_mean: float
    y: float
    ci_low: float
    ci_high: float
    n_points: int


@dataclass(frozen=True)
class BinnedCurve:
    bins: tuple[Bin, ...]
    k: int


def term_stability_in_quote(
    term: str, quote_id: int, nbhd: Neighborhood, qs: QuoteSet
) -> float:
    """s(t|q): mention-weighted fraction of the neighborhood containing t."""
    if term not in qs[quote_id].text.split():
        raise DomainError(f"term {term!r} does not occur in quote {quote_id}")
    num = 0.0
    den = 0.0
    for other in nbhd.quote_ids:
        w = qs[other].mentions
        den += w
        if term in qs[other].text.split():
            num += w
    return num / den


def term_stability(records: Sequence[tuple[float, float]]) -> float:
    """s(t): weighted average of (s(t|q), w_q) records over quotes containing t.

    The per-quote sum is normalized by the total weight so the result stays
    in [0, 1].
    """
    if not records:
        raise DomainError("term has no stability records")
    num = sum(w * s for s, w in records)
    den = sum(w for _, w in records)
    return num / den


def quote_stability(quote_id: int, nbhd: Neighborhood, qs: QuoteSet) -> float:
    """S(q): the quote's mention share within its neighborhood V_q."""
    den = sum(qs[other].mentions for other in nbhd.quote_ids)
    return qs[quote_id].mentions / den


def entropy(mentions: Iterable[int]) -> float:
    """Shannon entropy (nats) of the mention distribution over versions."""
    weights = [w for w in mentions]
    if not weights:
        raise DomainError("entropy of an empty group is undefined")
    total = sum(weights)
    h = 0.0
    for w in weights:
        if w > 0:
            p = w / total
            h -= p * math.log(p)
    return h


def feature_stability(
    records: Sequence[tuple[object, float, float]]
) -> dict[object, float]:
    """Weighted mean stability per feature value from (key, value, weight) rows."""
    num: dict[object, float] = {}
    den: dict[object, float] = {}
    for key, value, weight in records:
        num[key] = num.get(key, 0.0) + weight * value
        den[key] = den.get(key, 0.0) + weight
    return {key: num[key] / den[key] for key in num}


def bin_quantiles(
    points: Sequence[tuple[float, float, float]], k: int
) -> BinnedCurve:
    """Split (x, y, weight) points into k equally populated contiguous bins.

    Points are sorted by x; bin populations differ by at most one (the
    remainder is spread over the first bins).  Each bin reports the weighted
    mean of y with a 95% normal-approximation confidence interval.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if len(points) < k:
        raise DomainError(f"need at least {k} points for {k} quantiles")
    data = sorted(points, key=lambda p: p[0])
    n = len(data)
    base, extra = divmod(n, k)
    bins = []
    start = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        chunk = data[start:start + size]
        start += size
        x = np.array([p[0] for p in chunk])
        y = np.array([p[1] for p in chunk])
        w = np.array([p[2] for p in chunk])
        wsum = w.sum()
        mean = float(np.dot(w, y) / wsum)
        se = float(np.sqrt(np.dot(w * w, (y - mean) ** 2)) / wsum)
        bins.append(
            Bin(
                x_mean=float(x.mean()),
                y=mean,
                ci_low=mean - _Z95 * se,
                ci_high=mean + _Z95 * se,
                n_points=size,
            )
        )
    return BinnedCurve(bins=tuple(bins), k=k)


def family_entropy_decomposition(
    family_mentions: Sequence[Sequence[int]],
) -> tuple[float, float, float]:
    """Grouping identity pieces for one family split into sub-families.

    Returns (H_family, H_shares, sum_f pi_f * H_f) where pi_f is each
    sub-family's mention share; H_family = H_shares + sum_f pi_f * H_f.
    """
    totals = [sum(group) for group in family_mentions]
    flat = [w for group in family_mentions for w in group]
    h_family = entropy(flat)
    h_shares = entropy(totals)
    grand = sum(totals)
    h_within = sum(
        (t / grand) * entropy(group) for t, group in zip(totals, family_mentions)
    )
    return h_family, h_shares, h_within


def stability_records(
    qs: QuoteSet, edit_graphs: Sequence[EditGraph]
) -> tuple[dict[str, list[tuple[float, float]]], dict[int, float]]:
    """Corpus-wide stability sweep over families.

    Returns (term records, quote stabilities): term records map each term to
    its (s(t|q), w_q) rows; quote stabilities map quote id to S(q).
    """
    term_records: dict[str, list[tuple[float, float]]] = {}
    quote_s: dict[int, float] = {}
    for g in edit_graphs:
        for qid in g.quote_ids:
            nbhd = neighborhood(g, qid)
            quote_s[qid] = quote_stability(qid, nbhd, qs)
            w_q = qs[qid].mentions
            for term in set(qs[qid].text.split()):
                s = term_stability_in_quote(term, qid, nbhd, qs)
                term_records.setdefault(term, []).append((s, float(w_q)))
    return term_records, quote_s


def write_curve(curve: BinnedCurve, writer, header: str | None = None) -> None:
    """Dump a binned curve as ``x_mean,y,ci_low,ci_high,n`` rows."""
    if header:
        writer.write(header if header.endswith("\n") else header + "\n")
    writer.write("x_mean,y,ci_low,ci_high,n\n")
    for b in curve.bins:
        writer.write(
            f"{b.x_mean:.6f},{b.y:.6f},{b.ci_low:.6f},{b.ci_high:.6f},{b.n_points}\n"
        )
