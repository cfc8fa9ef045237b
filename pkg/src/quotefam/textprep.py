"""Token normalization (rule lemmatizer, stop words) and tf*idf weighting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from . import _wordlists
from .corpus import QuoteSet
from .exceptions import DomainError

TokenSeq = tuple[str, ...]

# Punctuation stripped from token boundaries; hyphens and apostrophes are
# kept when internal so that e.g. cease-fire stays a single distinct term.
_STRIP_CHARS = "!\"#$%&'()*+,./:;<=>?@[\\]^_`{|}~-‘’“”…"

_IRREGULAR = {
    "is": "be", "are": "be", "was": "be", "were": "be", "been": "be",
    "being": "be", "am": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "says": "say", "said": "say", "saying": "say",
    "goes": "go", "went": "go", "gone": "go", "going": "go",
    "children": "child", "men": "man", "women": "woman",
    "feet": "foot", "teeth": "tooth", "mice": "mouse",
    "made": "make", "got": "get", "gotten": "get", "came": "come",
    "took": "take", "taken": "take", "gave": "give", "given": "give",
    "told": "tell", "knew": "know", "known": "know", "thought": "think",
    "found": "find", "left": "leave", "felt": "feel", "kept": "keep",
    "saw": "see", "seen": "see", "stood": "stand", "lost": "lose",
    "paid": "pay", "met": "meet", "sat": "sit", "spoke": "speak",
    "spoken": "speak", "brought": "bring", "began": "begin", "begun": "begin",
    "wrote": "write", "written": "write", "held": "hold", "heard": "hear",
}

_VOWELS = set("aeiou")


def tokenize(text: str) -> TokenSeq:
    """Split canonical text on whitespace, stripping boundary punctuation."""
    tokens = []
    for raw in text.split():
        tok = raw.strip(_STRIP_CHARS)
        if tok:
            tokens.append(tok)
    return tuple(tokens)


def rule_lemma(word: str) -> str:
    """Crude suffix-stripping lemmatizer used as fallback below lemma_map."""
    if word in _IRREGULAR:
        return _IRREGULAR[word]
    if len(word) >= 4 and word.endswith("ies"):
        return word[:-3] + "y"
    if len(word) >= 5 and word.endswith("es"):
        stem = word[:-2]
        if stem.endswith(("s", "x", "z", "ch", "sh")):
            return stem
        return word[:-1]
    if (
        len(word) >= 4
        and word.endswith("s")
        and not word.endswith(("ss", "us", "is", "'s"))
    ):
        return word[:-1]
    if len(word) >= 6 and word.endswith("ing"):
        stem = word[:-3]
        if any(c in _VOWELS for c in stem):
            if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
                return stem[:-1]
            return stem
        return word
    if len(word) >= 5 and word.endswith("ed") and not word.endswith("eed"):
        stem = word[:-2]
        if not any(c in _VOWELS for c in stem):
            return word
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
            return stem[:-1]
        if stem.endswith("i"):
            return stem[:-1] + "y"
        return stem
    return word


def normalize(
    seq: Sequence[str],
    lemma_map: Mapping[str, str] | None = None,
    stopwords: Iterable[str] | None = None,
) -> TokenSeq:
    """Lemmatize (lemma_map lookup, then rule fallback) and drop stop words."""
    stop = _wordlists.STOPWORDS if stopwords is None else set(stopwords)
    out = []
    for tok in seq:
        if tok in stop:
            continue
        if lemma_map is not None and tok in lemma_map:
            lemma = lemma_map[tok]
        else:
            lemma = rule_lemma(tok)
        if lemma and lemma not in stop:
            out.append(lemma)
    return tuple(out)


def load_lemma_map(reader: IO) -> dict[str, str]:
    """Read a TSV ``surface<TAB>lemma`` lemma table."""
    table = {}
    for line in reader:
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        surface, _, lemma = line.partition("\t")
        if lemma:
            table[surface.strip()] = lemma.strip()
    return table


def load_wordlist(reader: IO) -> frozenset[str]:
    """Read a one-term-per-line word list."""
    return frozenset(w.strip() for w in reader if w.strip())


@dataclass(frozen=True)
class TfIdfIndex:
    """Document frequencies and normalized token sequences for a QuoteSet.

    Term ids are assigned in lexicographic term order so that id-sequence
    comparisons agree with string-sequence comparisons.
    """

    n_quotes: int
    terms: tuple[str, ...]                 # id -> term, sorted
    term_id: Mapping[str, int]
    doc_freq: tuple[int, ...]              # by term id
    normalized: tuple[TokenSeq, ...]       # by quote id
    surface: tuple[TokenSeq, ...]          # by quote id, pre-normalization

    def idf(self, term: str) -> float:
        tid = self.term_id.get(term)
        if tid is None:
            raise DomainError(f"unknown term: {term!r}")
        return math.log(self.n_quotes / self.doc_freq[tid])

    def term_frequency(self, term: str) -> int:
        """Total occurrence count of a term over all normalized quotes."""
        tid = self.term_id.get(term)
        if tid is None:
            raise DomainError(f"unknown term: {term!r}")
        return sum(seq.count(term) for seq in self.normalized)


def build_index(
    qs: QuoteSet,
    lemma_map: Mapping[str, str] | None = None,
    stopwords: Iterable[str] | None = None,
) -> TfIdfIndex:
    surface = tuple(tokenize(q.text) for q in qs)
    normalized = tuple(normalize(seq, lemma_map, stopwords) for seq in surface)
    df: dict[str, int] = {}
    for seq in normalized:
        for term in set(seq):
            df[term] = df.get(term, 0) + 1
    terms = tuple(sorted(df))
    term_id = {t: i for i, t in enumerate(terms)}
    return TfIdfIndex(
        n_quotes=len(qs),
        terms=terms,
        term_id=term_id,
        doc_freq=tuple(df[t] for t in terms),
        normalized=normalized,
        surface=surface,
    )


def tfidf(index: TfIdfIndex, term: str, quote_id: int) -> float:
    """tf(term, quote) * ln(|Q| / doc_freq), tf being the raw in-quote count."""
    if not 0 <= quote_id < index.n_quotes:
        raise DomainError(f"unknown quote id: {quote_id}")
    tf = index.normalized[quote_id].count(term)
    if tf == 0:
        raise DomainError(f"term {term!r} does not occur in quote {quote_id}")
    return tf * index.idf(term)
