"""Clustering comparison statistics: precision / relative recall, Cohen's
kappa and the paired approximate-randomization significance test.

Reference values from the original study (precision .58, relative recall
.90, F .70, kappa 0.69, p = 0.049) require its human judgment data and are
documented here for comparison only.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .exceptions import DomainError

RELEVANT = "relevant"
NOT_RELEVANT = "not_relevant"
UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class JudgedFamily:
    """Relevance marks for one family: the evaluated method's list and the
    rival method's overlapping-families list.  Uncertain marks are excluded
    from all counts."""

    family_id: str
    list_one: tuple[str, ...]
    list_two: tuple[str, ...]


def precision_relative_recall(
    judged: Sequence[JudgedFamily],
) -> dict[str, float]:
    """Micro-averaged precision, relative recall and their harmonic mean.

    Precision: fraction of list-one items judged relevant.  Relative recall:
    relevant list-one items over the same count plus relevant items found
    only in list two.
    """
    n_one = 0
    rel_one = 0
    rel_two = 0
    for fam in judged:
        marks_one = [m for m in fam.list_one if m != UNCERTAIN]
        marks_two = [m for m in fam.list_two if m != UNCERTAIN]
        n_one += len(marks_one)
        rel_one += sum(1 for m in marks_one if m == RELEVANT)
        rel_two += sum(1 for m in marks_two if m == RELEVANT)
    if n_one == 0:
        raise DomainError("no judged items in any first list")
    precision = rel_one / n_one
    denom = rel_one + rel_two
    recall = rel_one / denom if denom else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"precision": precision, "relative_recall": recall, "f_measure": f}


def cohen_kappa(ann_a: Sequence, ann_b: Sequence) -> float:
    """(p_o - p_e) / (1 - p_e); defined as 1 when chance agreement is total."""
    if len(ann_a) != len(ann_b):
        raise DomainError("annotation sequences must have equal length")
    if not ann_a:
        raise DomainError("empty annotation sequences")
    n = len(ann_a)
    p_o = sum(1 for a, b in zip(ann_a, ann_b) if a == b) / n
    count_a = Counter(ann_a)
    count_b = Counter(ann_b)
    labels = set(count_a) | set(count_b)
    p_e = sum((count_a[l] / n) * (count_b[l] / n) for l in labels)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def approx_randomization_test(
    scores_a: Sequence[float],
    scores_b: Sequence[float],
    iterations: int = 10000,
    seed: int = 0,
) -> float:
    """Paired sign-flip randomization p-value with (r+1)/(R+1) smoothing.

    The statistic is the absolute mean paired difference; each resample
    flips every pair independently with probability one half.
    """
    if len(scores_a) != len(scores_b):
        raise DomainError("paired score lists must have equal length")
    if iterations < 100:
        raise DomainError("iterations must be >= 100")
    diffs = np.asarray(scores_a, dtype=float) - np.asarray(scores_b, dtype=float)
    observed = abs(diffs.mean())
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(iterations, diffs.size)) * 2 - 1
    stats = np.abs((signs * diffs).mean(axis=1))
    r = int(np.sum(stats >= observed - 1e-15))
    return (r + 1) / (iterations + 1)


def load_judgments(reader: IO) -> list[JudgedFamily]:
    """Read a judgments TSV ``family_id<TAB>list{1|2}<TAB>quote_text<TAB>mark``."""
    ones: dict[str, list[str]] = {}
    twos: dict[str, list[str]] = {}
    for lineno, line in enumerate(reader, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise DomainError(f"judgments line {lineno}: expected 4 fields")
        fam, which, _text, mark = parts
        if mark not in (RELEVANT, NOT_RELEVANT, UNCERTAIN):
            raise DomainError(f"judgments line {lineno}: unknown mark {mark!r}")
        if which == "1":
            ones.setdefault(fam, []).append(mark)
        elif which == "2":
            twos.setdefault(fam, []).append(mark)
        else:
            raise DomainError(f"judgments line {lineno}: list must be 1 or 2")
    out = []
    for fam in sorted(set(ones) | set(twos)):
        out.append(
            JudgedFamily(
                family_id=fam,
                list_one=tuple(ones.get(fam, ())),
                list_two=tuple(twos.get(fam, ())),
            )
        )
    return out
