"""Static and dynamic mutation-rate estimation and parametric rate-curve fits.

Replay walks each family as a growing set of mentions and classifies every
replication event as a perfect copy, a micro-mutation (new version inside an
existing sub-family) or a macro-mutation (new version founding a sub-family).
Covariates snapshot the source group strictly before the event: for copy and
micro events the source sub-family, for macro events the whole family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DomainError, FitError
from .metrics import Bin, BinnedCurve
from .subfam import SubFamily

_Z95 = 1.959963984540054

COPY = "copy"
MICRO = "micro"
MACRO = "macro"


@dataclass(frozen=True)
class MutationEvent:
    kind: str
    time_index: int
    family_id: int
    subfamily_id: int
    n_sub: int        # pre-event cumulated mentions of the source sub-family
    l_sub: float      # pre-event average version length of the source sub-family
    n_fam: int        # pre-event cumulated mentions of the family
    l_fam: float      # pre-event average version length of the family

    def covariate(self, covariate: str, channel: str) -> float:
        """Channel-appropriate covariate: sub-family state for the micro
        channel, family state for the macro channel."""
        if channel == MICRO:
            return self.n_sub if covariate == "n" else self.l_sub
        if channel == MACRO:
            return self.n_fam if covariate == "n" else self.l_fam
        raise DomainError(f"unknown channel: {channel!r}")


@dataclass(frozen=True)
class RateCurveFit:
    form: str                     # power_law | exp_saturation | peak_decay
    params: tuple[float, ...]
    rss: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.form == "power_law":
            a, b = self.params
            y = a * x ** (-b)
        elif self.form == "exp_saturation":
            c, d, e = self.params
            y = c - d * np.exp(-e * x)
        elif self.form == "peak_decay":
            c, d, e = self.params
            y = c + d * (x - 5.0) * np.exp(-e * x)
        else:
            raise DomainError(f"unknown form: {self.form!r}")
        return np.clip(y, 0.0, 1.0)


def static_rates(
    subfams: Sequence[SubFamily], family_mentions: int
) -> tuple[dict[int, float | None], float | None]:
    """Per-sub-family micro rates and the family macro rate.

    micro = (versions - 1) / (mentions - 1) per sub-family;
    macro = (sub-families - 1) / (family mentions - 1).
    Undefined rates (denominator zero) are reported as None.
    """
    micro: dict[int, float | None] = {}
    for sf in subfams:
        if sf.total_mentions >= 2:
            micro[sf.id] = (len(sf.quote_ids) - 1) / (sf.total_mentions - 1)
        else:
            micro[sf.id] = None
    macro = (len(subfams) - 1) / (family_mentions - 1) if family_mentions >= 2 else None
    return micro, macro


def mention_order(
    versions: Sequence[tuple[int, int, Sequence]],
) -> list[int]:
    """Total order over mentions for replay, given (quote id, mentions,
    timestamps) per version; returns the version id of each mention in order.

    With full timestamps, mentions sort by (timestamp, quote id).  Without,
    versions are ranked by descending mentions (id as tie break) as a
    first-appearance proxy: first appearances come first in rank order, then
    the remaining copies in rank order.  Dynamic rates under the fallback
    only approximate a time-ordered replay.
    """
    timed = all(len(stamps) == m for _, m, stamps in versions)
    if timed and versions:
        events = []
        for qid, m, stamps in versions:
            for s in stamps:
                events.append((s, qid))
        events.sort()
        return [qid for _, qid in events]
    ranked = sorted(versions, key=lambda v: (-v[1], v[0]))
    order = [qid for qid, _, _ in ranked]
    for qid, m, _ in ranked:
        order.extend([qid] * (m - 1))
    return order


def replay_family(
    family_id: int,
    versions: Sequence[tuple[int, int, Sequence]],
    subfamily_of: dict[int, int],
    lengths: dict[int, int],
    order: Sequence[int] | None = None,
) -> list[MutationEvent]:
    """Classify every mention after the first as copy, micro or macro.

    ``versions`` rows are (quote id, mentions, timestamps); ``subfamily_of``
    maps quote id to its sub-family id (connected component of the family's
    edit graph) and ``lengths`` to its word count.
    """
    if not versions:
        raise DomainError("cannot replay an empty family")
    if order is None:
        order = mention_order(versions)

    events: list[MutationEvent] = []
    seen: set[int] = set()
    sub_mentions: dict[int, int] = {}
    sub_lengths: dict[int, list[int]] = {}
    fam_mentions = 0
    fam_lengths: list[int] = []
    for t, qid in enumerate(order):
        sf = subfamily_of[qid]
        if t > 0:
            if qid in seen:
                kind = COPY
            elif sub_mentions.get(sf, 0) > 0:
                kind = MICRO
            else:
                kind = MACRO
            src_n = sub_mentions.get(sf, 0)
            src_l = (
                sum(sub_lengths[sf]) / len(sub_lengths[sf])
                if sub_lengths.get(sf)
                else 0.0
            )
            if kind == MACRO:
                # A founding version was copied from somewhere in the family.
                src_n = fam_mentions
                src_l = sum(fam_lengths) / len(fam_lengths)
            events.append(
                MutationEvent(
                    kind=kind,
                    time_index=t,
                    family_id=family_id,
                    subfamily_id=sf,
                    n_sub=src_n,
                    l_sub=src_l,
                    n_fam=fam_mentions,
                    l_fam=sum(fam_lengths) / len(fam_lengths),
                )
            )
        if qid not in seen:
            seen.add(qid)
            sub_lengths.setdefault(sf, []).append(lengths[qid])
            fam_lengths.append(lengths[qid])
        sub_mentions[sf] = sub_mentions.get(sf, 0) + 1
        fam_mentions += 1
    return events


def binned_rates(
    events: Sequence[MutationEvent],
    covariate: str = "n",
    k: int = 15,
    channel: str = MICRO,
    exact_ci: bool = False,
) -> BinnedCurve:
    """Per-quantile mutation rate of one channel against a covariate.

    Every event enters the denominator; the rate in a bin is the fraction of
    its events with the channel's kind.  The confidence interval is a normal
    approximation of a proportion (Clopper-Pearson behind ``exact_ci``).
    """
    if not events:
        raise DomainError("no events to bin")
    if covariate not in ("n", "l"):
        raise DomainError(f"unknown covariate: {covariate!r}")
    data = sorted(
        ((ev.covariate(covariate, channel), ev) for ev in events),
        key=lambda pair: pair[0],
    )
    n = len(data)
    k = min(k, n)
    base, extra = divmod(n, k)
    bins = []
    start = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        chunk = data[start:start + size]
        start += size
        hits = sum(1 for _, ev in chunk if ev.kind == channel)
        p = hits / size
        if exact_ci:
            from scipy.stats import beta

            lo = beta.ppf(0.025, hits, size - hits + 1) if hits > 0 else 0.0
            hi = beta.ppf(0.975, hits + 1, size - hits) if hits < size else 1.0
        else:
            se = math.sqrt(p * (1.0 - p) / size)
            lo, hi = p - _Z95 * se, p + _Z95 * se
        bins.append(
            Bin(
                x_mean=sum(x for x, _ in chunk) / size,
                y=p,
                ci_low=lo,
                ci_high=hi,
                n_points=size,
            )
        )
    return BinnedCurve(bins=tuple(bins), k=k)


def fit_power_law(curve: Sequence[tuple[float, float]]) -> RateCurveFit:
    """Closed-form least squares of ln y = ln a - b ln x."""
    x = np.array([p[0] for p in curve], dtype=float)
    y = np.array([p[1] for p in curve], dtype=float)
    if np.any(y <= 0.0) or np.any(x <= 0.0):
        raise DomainError("power-law fit requires strictly positive x and y")
    lx = np.log(x)
    ly = np.log(y)
    vx = np.var(lx)
    if vx == 0.0:
        b = 0.0
    else:
        b = -float(np.cov(lx, ly, bias=True)[0, 1] / vx)
    ln_a = float(np.mean(ly) + b * np.mean(lx))
    resid = ly - (ln_a - b * lx)
    return RateCurveFit(
        form="power_law", params=(math.exp(ln_a), b), rss=float(np.dot(resid, resid))
    )


def _model_and_jacobian(form: str, x: np.ndarray, params: np.ndarray):
    c, d, e = params
    if form == "exp_saturation":
        g = np.exp(-e * x)
        f = c - d * g
        J = np.column_stack([np.ones_like(x), -g, d * x * g])
    elif form == "peak_decay":
        g = (x - 5.0) * np.exp(-e * x)
        f = c + d * g
        J = np.column_stack([np.ones_like(x), g, -d * x * g])
    else:
        raise DomainError(f"unknown form: {form!r}")
    return f, J


def _linear_cd_solve(form: str, x, y, e: float) -> tuple[float, float, float]:
    """Both length forms are linear in (c, d) at fixed e: solve that
    subproblem exactly and return (c, d, rss)."""
    if form == "exp_saturation":
        basis = -np.exp(-e * x)
    else:
        basis = (x - 5.0) * np.exp(-e * x)
    A = np.column_stack([np.ones_like(x), basis])
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ sol
    return float(sol[0]), float(sol[1]), float(np.dot(resid, resid))


_MULTISTART_C = (0.0, 0.01, 0.05)
_MULTISTART_D = (0.01, -0.01, 0.1, -0.1, 0.5, -0.5)
_MULTISTART_E = (0.1, 0.5, 1.0)
_GN_ITERATIONS = 200
_GN_TOL = 1e-10


def _gauss_newton(form, x, y, start):
    params = np.asarray(start, dtype=float)
    f, J = _model_and_jacobian(form, x, params)
    rss = float(np.sum((y - f) ** 2))
    lam = 1e-3
    for _ in range(_GN_ITERATIONS):
        r = y - f
        A = J.T @ J
        g = J.T @ r
        stepped = False
        for _ in range(40):
            try:
                delta = np.linalg.solve(A + lam * np.eye(3), g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = params + delta
            # wild trial steps can overflow exp(); they fail the finite check
            with np.errstate(over="ignore", invalid="ignore"):
                ft, Jt = _model_and_jacobian(form, x, trial)
                rss_t = float(np.sum((y - ft) ** 2))
            if np.isfinite(rss_t) and rss_t <= rss:
                rel = np.max(np.abs(delta) / np.maximum(np.abs(trial), 1e-12))
                params, f, J, rss = trial, ft, Jt, rss_t
                lam = max(lam / 10.0, 1e-15)
                stepped = True
                if rel < _GN_TOL:
                    return params, rss, True
                break
            lam *= 10.0
        if not stepped:
            return params, rss, True   # damping exhausted: local minimum
    return params, rss, False


def fit_length_forms(
    curve: Sequence[tuple[float, float]], form: str
) -> RateCurveFit:
    """Nonlinear least squares of the length-dependent rate forms.

    ``form``: ``macro`` fits c - d*exp(-e*l); ``micro`` fits
    c + d*(l-5)*exp(-e*l).  Coordinate-descent seeding (exact linear solve
    of (c, d) on an e grid) plus the documented multi-start grid, each
    refined by damped Gauss-Newton; best of starts wins by RSS then
    lexicographic parameter order.
    """
    form_name = {"macro": "exp_saturation", "micro": "peak_decay"}.get(form, form)
    if form_name not in ("exp_saturation", "peak_decay"):
        raise DomainError(f"unknown form: {form!r}")
    x = np.array([p[0] for p in curve], dtype=float)
    y = np.array([p[1] for p in curve], dtype=float)
    if x.size < 3:
        raise DomainError("need at least as many points as parameters")

    starts = []
    for e in np.geomspace(0.01, 3.0, 25):
        c, d, _ = _linear_cd_solve(form_name, x, y, float(e))
        starts.append((c, d, float(e)))
    for c in _MULTISTART_C:
        for d in _MULTISTART_D:
            for e in _MULTISTART_E:
                starts.append((c, d, e))

    best = None
    converged_any = False
    for start in starts:
        params, rss, converged = _gauss_newton(form_name, x, y, start)
        converged_any = converged_any or converged
        key = (rss, tuple(params))
        if best is None or key < best[0]:
            best = (key, params, rss)
    _, params, rss = best
    fit = RateCurveFit(form=form_name, params=tuple(float(p) for p in params), rss=rss)
    if not converged_any:
        raise FitError("no start converged", partial=fit)
    return fit
