import numpy as np
import pytest

from quotefam import morphsim, mutation, subfam
from quotefam.exceptions import ConfigError, DomainError


def test_combined_rate_constant_model():
    model = morphsim.RateModel.constant(0.05, 0.02)
    assert morphsim.combined_rate(model, mutation.MICRO, 10, 3) == pytest.approx(0.05)
    assert morphsim.combined_rate(model, mutation.MACRO, 10, 3) == pytest.approx(0.02)
    with pytest.raises(DomainError):
        morphsim.combined_rate(model, "bogus", 10, 3)
    with pytest.raises(DomainError):
        morphsim.combined_rate(model, mutation.MICRO, 0, 3)


def test_combined_rate_clamped():
    model = morphsim.RateModel.constant(1.0, 1.0)
    big = morphsim.RateModel(
        micro_l=lambda l: 10.0, micro_n=lambda n: 10.0,
        macro_l=lambda l: 10.0, macro_n=lambda n: 10.0,
        micro_mean=1.0, macro_mean=1.0,
    )
    assert morphsim.combined_rate(big, mutation.MICRO, 5, 5) == 1.0
    assert morphsim.combined_rate(model, mutation.MACRO, 5, 5) == 1.0


def test_rate_model_rejects_nonpositive_mean():
    with pytest.raises(ConfigError):
        morphsim.RateModel(
            micro_l=lambda l: 0.1, micro_n=lambda n: 0.1,
            macro_l=lambda l: 0.1, macro_n=lambda n: 0.1,
            micro_mean=0.0, macro_mean=0.1,
        )


def test_published_defaults_evaluate():
    model = morphsim.RateModel.published_defaults()
    assert 0.0 < model.micro_mean < 1.0
    assert 0.0 < model.macro_mean < 1.0
    assert model.micro_l(10) > 0.0
    assert model.macro_n(32) > 0.0


def test_copy_only_model_keeps_single_version():
    model = morphsim.RateModel.constant(1e-12, 1e-12)
    fam = morphsim.simulate_family(10, 200, model, seed=4)
    assert fam.n_versions == 1
    assert fam.total_mentions == 200
    assert all(ev.kind == mutation.COPY for ev in fam.events)


def test_simulate_family_deterministic():
    model = morphsim.RateModel.constant(0.1, 0.05)
    a = morphsim.simulate_family(12, 150, model, seed=9)
    b = morphsim.simulate_family(12, 150, model, seed=9)
    assert [q.tokens for q in a.quotes] == [q.tokens for q in b.quotes]
    assert [ev.kind for ev in a.events] == [ev.kind for ev in b.events]
    c = morphsim.simulate_family(12, 150, model, seed=10)
    assert [ev.kind for ev in c.events] != [ev.kind for ev in a.events] or [
        q.tokens for q in c.quotes
    ] != [q.tokens for q in a.quotes]


def test_simulate_family_validation():
    model = morphsim.RateModel.constant(0.1, 0.05)
    with pytest.raises(DomainError):
        morphsim.simulate_family(0, 10, model, seed=0)
    with pytest.raises(DomainError):
        morphsim.simulate_family(5, 0, model, seed=0)


def test_macro_respects_min_trim_len():
    model = morphsim.RateModel.constant(0.01, 0.5)
    fam = morphsim.simulate_family(12, 300, model, seed=2, min_trim_len=6)
    for q in fam.quotes:
        assert q.length >= 6
    assert fam.n_subfamilies > 1  # high macro rate must actually trigger trims


def test_micro_keeps_edit_distance_one_macro_at_least_two():
    model = morphsim.RateModel.constant(0.15, 0.05)
    fam = morphsim.simulate_family(10, 200, model, seed=11)
    texts = [" ".join(str(t) for t in q.tokens) for q in fam.quotes]
    # Versions in the same sub-family are connected at distance <= 1;
    # versions in different sub-families are always >= 2 apart.
    for i in range(len(texts)):
        for j in range(i + 1, len(texts)):
            d = subfam.token_edit_distance(texts[i], texts[j])
            if fam.quotes[i].subfamily != fam.quotes[j].subfamily:
                assert d >= 2
            else:
                assert d >= 1  # all versions distinct


def test_subfamily_labels_match_edit_components():
    model = morphsim.RateModel.constant(0.2, 0.1)
    fam = morphsim.simulate_family(9, 150, model, seed=21)
    texts = [" ".join(str(t) for t in q.tokens) for q in fam.quotes]
    g = subfam.build_edit_graph(list(range(len(texts))), texts, max_edit=1)
    comps = subfam.subfamilies(g)
    label_of = {}
    for sf in comps:
        for qid in sf.quote_ids:
            label_of[qid] = sf.id
    # Simulated labels and recomputed components induce the same grouping.
    seen = {}
    for qid, q in enumerate(fam.quotes):
        key = q.subfamily
        if key in seen:
            assert seen[key] == label_of[qid]
        else:
            assert label_of[qid] not in seen.values()
            seen[key] = label_of[qid]


def test_round_trip_replay_matches_event_log():
    model = morphsim.RateModel.constant(0.15, 0.08)
    for seed in range(5):
        fam = morphsim.simulate_family(10, 120, model, seed=seed)
        events = mutation.replay_family(
            0, fam.replay_versions(), fam.subfamily_of(), fam.lengths()
        )
        assert [ev.kind for ev in events] == [ev.kind for ev in fam.events]
        for got, want in zip(events, fam.events):
            assert got.n_sub == want.n_sub
            assert got.n_fam == want.n_fam
            assert got.l_fam == pytest.approx(want.l_fam)


def test_simulate_corpus_summary():
    model = morphsim.RateModel.constant(0.1, 0.05)
    targets = [(10, 40)] * 12
    corpus_, summary = morphsim.simulate_corpus(targets, model, seed=3)
    assert len(corpus_.families) == 12
    assert summary["n_versions"] == sum(f.n_versions for f in corpus_.families)
    assert sum(k * v for k, v in summary["size_histogram"].items()) == 12 * 40
    assert "family_entropy_curve" in summary
    assert len(corpus_.all_events()) == 12 * 39


def test_simulate_corpus_validation():
    model = morphsim.RateModel.constant(0.1, 0.05)
    with pytest.raises(DomainError):
        morphsim.simulate_corpus([], model, seed=0)


def test_step_function_advances():
    model = morphsim.RateModel.constant(0.1, 0.05)
    rng = np.random.default_rng(0)
    sim = morphsim._Sim(8, model, rng, morphsim.DEFAULT_MIN_TRIM_LEN, family_id=0)
    ev = morphsim.step(sim)
    assert ev.kind in (mutation.COPY, mutation.MICRO, mutation.MACRO)
    assert sim.fam_mentions == 2
