"""Polya-urn generative simulator of quotation family morphogenesis.

Each step picks a sub-family uniformly, a version inside it proportionally
to its mentions, then cascades: micro test (one-word edit with a fresh
token id), macro test when the version is long enough (contiguous trim
founding a new sub-family), else a perfect copy.  Channel rates combine the
length and popularity curves as rho(l) * rho(n) / <rho>, clamped to [0, 1].

New versions are guaranteed to sit at token edit distance 1 from their
parent (micro) or >= 2 from every version of the family (macro), so that
replaying a simulated family classifies every event exactly as the
simulator logged it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .exceptions import ConfigError, DomainError
from .mutation import COPY, MACRO, MICRO, MutationEvent, RateCurveFit

DEFAULT_MIN_TRIM_LEN = 5

#: Medians of the calibration event log used for the default <rho> estimate.
CALIBRATION_MEDIAN_N = 32
CALIBRATION_MEDIAN_L = 10

RateFn = Callable[[float], float]


def _published_curve(form: str, params: tuple[float, ...]) -> RateCurveFit:
    return RateCurveFit(form=form, params=params, rss=0.0)


@dataclass(frozen=True)
class RateModel:
    """Four parametric rate curves plus the per-channel mean rate <rho>."""

    micro_l: RateFn
    micro_n: RateFn
    macro_l: RateFn
    macro_n: RateFn
    micro_mean: float
    macro_mean: float

    def __post_init__(self):
        if self.micro_mean <= 0.0 or self.macro_mean <= 0.0:
            raise ConfigError("mean rates <rho> must be positive")

    @classmethod
    def published_defaults(cls) -> "RateModel":
        """Rate curves fitted to the original news-quote corpus; <rho>
        defaults to the geometric mean of each channel's two curves at the
        calibration medians."""
        micro_n = _published_curve("power_law", (0.057, 0.739))
        macro_n = _published_curve("power_law", (0.225, 0.763))
        macro_l = _published_curve("exp_saturation", (0.020, 0.292, 0.499))
        micro_l = _published_curve("peak_decay", (0.004, 0.046, 0.423))
        micro_mean = math.sqrt(
            float(micro_l(CALIBRATION_MEDIAN_L)) * float(micro_n(CALIBRATION_MEDIAN_N))
        )
        macro_mean = math.sqrt(
            float(macro_l(CALIBRATION_MEDIAN_L)) * float(macro_n(CALIBRATION_MEDIAN_N))
        )
        return cls(
            micro_l=lambda l: float(micro_l(l)),
            micro_n=lambda n: float(micro_n(n)),
            macro_l=lambda l: float(macro_l(l)),
            macro_n=lambda n: float(macro_n(n)),
            micro_mean=micro_mean,
            macro_mean=macro_mean,
        )

    @classmethod
    def constant(cls, micro: float, macro: float) -> "RateModel":
        """Constant channel rates; the combination rule then returns the
        constants unchanged."""
        return cls(
            micro_l=lambda l: micro,
            micro_n=lambda n: micro,
            macro_l=lambda l: macro,
            macro_n=lambda n: macro,
            micro_mean=micro,
            macro_mean=macro,
        )

    @classmethod
    def from_fits(
        cls,
        micro_l: RateCurveFit,
        micro_n: RateCurveFit,
        macro_l: RateCurveFit,
        macro_n: RateCurveFit,
        micro_mean: float | None = None,
        macro_mean: float | None = None,
    ) -> "RateModel":
        if micro_mean is None:
            micro_mean = math.sqrt(
                float(micro_l(CALIBRATION_MEDIAN_L))
                * float(micro_n(CALIBRATION_MEDIAN_N))
            )
        if macro_mean is None:
            macro_mean = math.sqrt(
                float(macro_l(CALIBRATION_MEDIAN_L))
                * float(macro_n(CALIBRATION_MEDIAN_N))
            )
        return cls(
            micro_l=lambda l: float(micro_l(l)),
            micro_n=lambda n: float(micro_n(n)),
            macro_l=lambda l: float(macro_l(l)),
            macro_n=lambda n: float(macro_n(n)),
            micro_mean=micro_mean,
            macro_mean=macro_mean,
        )


def combined_rate(model: RateModel, channel: str, l: float, n: float) -> float:
    """rho_channel(l) * rho_channel(n) / <rho_channel>, clamped to [0, 1]."""
    if l < 1 or n < 1:
        raise DomainError("l and n must be >= 1")
    if channel == MICRO:
        raw = model.micro_l(l) * model.micro_n(n) / model.micro_mean
    elif channel == MACRO:
        raw = model.macro_l(l) * model.macro_n(n) / model.macro_mean
    else:
        raise DomainError(f"unknown channel: {channel!r}")
    return min(1.0, max(0.0, raw))


@dataclass
class SimQuote:
    tokens: tuple[int, ...]
    mentions: int
    subfamily: int
    mention_times: list[int] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass
class SimFamily:
    seed_length: int
    quotes: list[SimQuote]
    events: list[MutationEvent]
    rng_seed: int

    @property
    def total_mentions(self) -> int:
        return sum(q.mentions for q in self.quotes)

    @property
    def n_versions(self) -> int:
        return len(self.quotes)

    @property
    def n_subfamilies(self) -> int:
        return len({q.subfamily for q in self.quotes})

    def subfamily_mentions(self) -> dict[int, list[int]]:
        groups: dict[int, list[int]] = {}
        for q in self.quotes:
            groups.setdefault(q.subfamily, []).append(q.mentions)
        return groups

    def replay_versions(self):
        """(quote id, mentions, timestamps) rows for mutation.replay_family."""
        return [
            (qid, q.mentions, list(q.mention_times))
            for qid, q in enumerate(self.quotes)
        ]

    def subfamily_of(self) -> dict[int, int]:
        return {qid: q.subfamily for qid, q in enumerate(self.quotes)}

    def lengths(self) -> dict[int, int]:
        return {qid: q.length for qid, q in enumerate(self.quotes)}


class _Sim:
    def __init__(self, l0: int, model: RateModel, rng: np.random.Generator,
                 min_trim_len: int, family_id: int):
        self.model = model
        self.rng = rng
        self.min_trim_len = min_trim_len
        self.family_id = family_id
        self.quotes: list[SimQuote] = [
            SimQuote(tokens=tuple(range(l0)), mentions=1, subfamily=0,
                     mention_times=[0])
        ]
        self.next_token = l0
        self.n_subfamilies = 1
        self.sub_mentions = {0: 1}
        self.sub_lengths = {0: [l0]}
        self.fam_mentions = 1
        self.fam_lengths = [l0]
        self.events: list[MutationEvent] = []

    def _fresh_token(self) -> int:
        tok = self.next_token
        self.next_token += 1
        return tok

    def _pick_source(self) -> SimQuote:
        sf = int(self.rng.integers(self.n_subfamilies))
        members = [q for q in self.quotes if q.subfamily == sf]
        weights = np.array([q.mentions for q in members], dtype=float)
        idx = int(self.rng.choice(len(members), p=weights / weights.sum()))
        return members[idx]

    def _conflicts(self, tokens: tuple[int, ...], skip_subfamily: int | None) -> bool:
        """True if tokens are identical to, or within edit distance 1 of, an
        existing version (optionally ignoring one sub-family)."""
        cand = np.asarray(tokens, dtype=np.int64)
        for q in self.quotes:
            if skip_subfamily is not None and q.subfamily == skip_subfamily:
                continue
            other = np.asarray(q.tokens, dtype=np.int64)
            if _kernels.unit_edit_distance_banded(cand, other, 1) <= 1:
                return True
        return False

    def _micro_variant(self, src: SimQuote) -> tuple[int, ...]:
        l = src.length
        ops = ["insert", "substitute"] + (["delete"] if l >= 2 else [])
        op = ops[int(self.rng.integers(len(ops)))]
        tokens = list(src.tokens)
        if op == "insert":
            pos = int(self.rng.integers(l + 1))
            tokens.insert(pos, self._fresh_token())
        elif op == "substitute":
            pos = int(self.rng.integers(l))
            tokens[pos] = self._fresh_token()
        else:
            pos = int(self.rng.integers(l))
            candidate = tuple(tokens[:pos] + tokens[pos + 1:])
            # A deletion may recreate an ancestor or touch a foreign
            # sub-family; substitute a fresh token instead in that case.
            if any(candidate == q.tokens for q in self.quotes) or self._conflicts(
                candidate, skip_subfamily=src.subfamily
            ):
                tokens[pos] = self._fresh_token()
            else:
                return candidate
        return tuple(tokens)

    def _macro_variant(self, src: SimQuote) -> tuple[int, ...] | None:
        """Contiguous sub-sequence at edit distance >= 2 from every existing
        version, or None when no window qualifies."""
        l = src.length
        windows = [
            (length, offset)
            for length in range(self.min_trim_len, l)
            for offset in range(l - length + 1)
        ]
        order = self.rng.permutation(len(windows))
        for k in order:
            length, offset = windows[int(k)]
            if length > l - 2:
                continue   # distance to the parent would be < 2
            candidate = src.tokens[offset:offset + length]
            if not self._conflicts(candidate, skip_subfamily=None):
                return candidate
        return None

    def _record(self, kind: str, src: SimQuote) -> None:
        sf = src.subfamily
        self.events.append(
            MutationEvent(
                kind=kind,
                time_index=self.fam_mentions,
                family_id=self.family_id,
                subfamily_id=sf,
                n_sub=self.sub_mentions[sf],
                l_sub=sum(self.sub_lengths[sf]) / len(self.sub_lengths[sf]),
                n_fam=self.fam_mentions,
                l_fam=sum(self.fam_lengths) / len(self.fam_lengths),
            )
        )

    def _add_quote(self, tokens: tuple[int, ...], subfamily: int) -> None:
        q = SimQuote(tokens=tokens, mentions=1, subfamily=subfamily,
                     mention_times=[self.fam_mentions])
        self.quotes.append(q)
        self.sub_mentions[subfamily] = self.sub_mentions.get(subfamily, 0) + 1
        self.sub_lengths.setdefault(subfamily, []).append(q.length)
        self.fam_mentions += 1
        self.fam_lengths.append(q.length)

    def step(self) -> MutationEvent:
        src = self._pick_source()
        sf = src.subfamily
        l = src.length
        u_micro = self.rng.random()
        if u_micro < combined_rate(self.model, MICRO, l, self.sub_mentions[sf]):
            self._record(MICRO, src)
            self._add_quote(self._micro_variant(src), sf)
            return self.events[-1]
        if l > self.min_trim_len:
            u_macro = self.rng.random()
            if u_macro < combined_rate(self.model, MACRO, l, self.fam_mentions):
                candidate = self._macro_variant(src)
                if candidate is not None:
                    # Macro covariates snapshot the whole family.
                    self.events.append(
                        MutationEvent(
                            kind=MACRO,
                            time_index=self.fam_mentions,
                            family_id=self.family_id,
                            subfamily_id=self.n_subfamilies,
                            n_sub=self.fam_mentions,
                            l_sub=sum(self.fam_lengths) / len(self.fam_lengths),
                            n_fam=self.fam_mentions,
                            l_fam=sum(self.fam_lengths) / len(self.fam_lengths),
                        )
                    )
                    new_sf = self.n_subfamilies
                    self.n_subfamilies += 1
                    self._add_quote(candidate, new_sf)
                    return self.events[-1]
        self._record(COPY, src)
        src.mentions += 1
        src.mention_times.append(self.fam_mentions)
        self.sub_mentions[sf] += 1
        self.fam_mentions += 1
        return self.events[-1]


def step(sim: _Sim) -> MutationEvent:
    """Advance a running simulation by one replication event."""
    return sim.step()


def simulate_family(
    l0: int,
    n_mentions: int,
    model: RateModel,
    seed: int,
    min_trim_len: int = DEFAULT_MIN_TRIM_LEN,
    family_id: int = 0,
) -> SimFamily:
    """Grow one family to exactly ``n_mentions`` total mentions."""
    if l0 < 1:
        raise DomainError("seed length must be >= 1")
    if n_mentions < 1:
        raise DomainError("mention budget must be >= 1")
    rng = np.random.default_rng(seed)
    sim = _Sim(l0, model, rng, min_trim_len, family_id)
    while sim.fam_mentions < n_mentions:
        sim.step()
    return SimFamily(
        seed_length=l0, quotes=sim.quotes, events=sim.events, rng_seed=seed
    )


@dataclass(frozen=True)
class SimCorpus:
    families: tuple[SimFamily, ...]

    def all_events(self) -> list[MutationEvent]:
        return [ev for fam in self.families for ev in fam.events]


def simulate_corpus(
    targets: Sequence[tuple[int, int]],
    model: RateModel,
    seed: int,
    min_trim_len: int = DEFAULT_MIN_TRIM_LEN,
    entropy_quantiles: int = 10,
) -> tuple[SimCorpus, dict]:
    """One family per (seed length, mention budget) target, plus a summary."""
    if not targets:
        raise DomainError("targets must be non-empty")
    families = []
    for i, (l0, n) in enumerate(targets):
        fam_seed_rng = np.random.default_rng([seed, i])
        fam_seed = int(fam_seed_rng.integers(2**63))
        families.append(
            simulate_family(
                l0, n, model, fam_seed, min_trim_len=min_trim_len, family_id=i
            )
        )
    corpus = SimCorpus(families=tuple(families))
    summary = summarize(corpus, entropy_quantiles=entropy_quantiles)
    return corpus, summary


def summarize(corpus: SimCorpus, entropy_quantiles: int = 10) -> dict:
    from .metrics import bin_quantiles, entropy

    n_versions = sum(f.n_versions for f in corpus.families)
    n_subfamilies = sum(f.n_subfamilies for f in corpus.families)
    subfam_sizes: list[int] = []
    fam_points = []
    sub_points = []
    for fam in corpus.families:
        groups = fam.subfamily_mentions()
        sizes = [sum(ms) for ms in groups.values()]
        subfam_sizes.extend(sizes)
        all_mentions = [m for ms in groups.values() for m in ms]
        fam_points.append((float(sum(sizes)), entropy(all_mentions), 1.0))
        for ms in groups.values():
            sub_points.append((float(sum(ms)), entropy(ms), 1.0))
    hist: dict[int, int] = {}
    for s in subfam_sizes:
        hist[s] = hist.get(s, 0) + 1
    summary = {
        "n_versions": n_versions,
        "n_subfamilies": n_subfamilies,
        "size_histogram": dict(sorted(hist.items())),
    }
    k = entropy_quantiles
    if len(fam_points) >= k and len(sub_points) >= k:
        summary["family_entropy_curve"] = bin_quantiles(fam_points, k)
        summary["subfamily_entropy_curve"] = bin_quantiles(sub_points, k)
    return summary
