import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quotefam import corpus, textprep
from quotefam.exceptions import DomainError


def _quoteset(texts, counts=None):
    counts = counts or [1] * len(texts)
    mentions = []
    for text, c in zip(texts, counts):
        mentions.extend([corpus.Mention(corpus.canonicalize(text))] * c)
    return corpus.aggregate(mentions, min_mentions=1)


def test_tokenize_strips_boundary_punctuation():
    assert textprep.tokenize('he said, "go home!"') == ("he", "said", "go", "home")


def test_tokenize_keeps_internal_hyphen_apostrophe():
    assert textprep.tokenize("a cease-fire isn't over.") == (
        "a", "cease-fire", "isn't", "over",
    )


@pytest.mark.parametrize(
    "word,lemma",
    [
        ("is", "be"), ("said", "say"), ("went", "go"),
        ("attacks", "attack"), ("parties", "party"), ("boxes", "box"),
        ("watches", "watch"), ("classes", "class"),
        ("running", "run"), ("standing", "stand"), ("voting", "vot"),
        ("walked", "walk"), ("stopped", "stop"), ("tried", "try"),
        ("glass", "glass"), ("bus", "bus"), ("this", "this"),
        ("freed", "freed"), ("sing", "sing"), ("red", "red"),
    ],
)
def test_rule_lemma(word, lemma):
    assert textprep.rule_lemma(word) == lemma


def test_normalize_drops_stopwords_and_lemmatizes():
    seq = ("the", "attacks", "are", "outrageous")
    assert textprep.normalize(seq) == ("attack", "outrageous")


def test_normalize_lemma_map_overrides_rules():
    seq = ("voting",)
    assert textprep.normalize(seq, lemma_map={"voting": "vote"}, stopwords=()) == ("vote",)


def test_load_lemma_map_and_wordlist():
    table = textprep.load_lemma_map(io.StringIO("# comment\nvoting\tvote\n\n"))
    assert table == {"voting": "vote"}
    words = textprep.load_wordlist(io.StringIO("alpha\nbeta\n\n"))
    assert words == frozenset({"alpha", "beta"})


def test_index_term_ids_are_lexicographic():
    qs = _quoteset(["zebra apple", "apple mango", "mango zebra"])
    index = textprep.build_index(qs, stopwords=())
    assert list(index.terms) == sorted(index.terms)
    for a, b in zip(index.terms, index.terms[1:]):
        assert index.term_id[a] < index.term_id[b]


def test_idf_and_tfidf_values():
    # Three quotes; "apple" in two of them, twice in the first.
    qs = _quoteset(["apple apple mango", "apple zebra", "mango zebra"])
    index = textprep.build_index(qs, stopwords=())
    assert index.idf("apple") == pytest.approx(math.log(3 / 2))
    qid = next(q.id for q in qs if q.text == "apple apple mango")
    assert textprep.tfidf(index, "apple", qid) == pytest.approx(2 * math.log(3 / 2))


def test_tfidf_unknown_pairing_raises():
    qs = _quoteset(["apple mango", "zebra lion"])
    index = textprep.build_index(qs, stopwords=())
    with pytest.raises(DomainError):
        textprep.tfidf(index, "zebra", 0 if qs[0].text == "apple mango" else 1)
    with pytest.raises(DomainError):
        index.idf("missing")


def test_term_frequency_counts_occurrences():
    qs = _quoteset(["apple apple mango", "apple zebra"])
    index = textprep.build_index(qs, stopwords=())
    assert index.term_frequency("apple") == 3


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12))
def test_rule_lemma_never_empty_and_idempotent_shape(word):
    lemma = textprep.rule_lemma(word)
    assert lemma
    assert len(lemma) <= len(word) + 1
