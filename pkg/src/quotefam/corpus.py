"""Parsing of quote mention streams and aggregation into a canonical QuoteSet.

Two input carriers are supported:

* ``memetracker-records``: blank-line separated blocks of ``P<TAB>url``,
  ``T<TAB>YYYY-MM-DD HH:MM:SS``, ``Q<TAB>quote text`` and ``L<TAB>url`` lines.
  Every ``Q`` line yields one mention stamped with the block's ``T``.
* ``tsv``: ``quote_text<TAB>count[<TAB>ISO8601,ISO8601,...]``; a line with
  count ``n`` expands to ``n`` mentions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Iterator, Sequence

from .exceptions import DomainError, FormatError

_WS_RUN = re.compile(r"\s+")

#: Fraction of malformed records tolerated before parsing hard-fails.
MALFORMED_TOLERANCE = 0.10


def canonicalize(text: str) -> str:
    """Lowercase and collapse whitespace runs to single spaces."""
    return _WS_RUN.sub(" ", text.strip()).lower()


@dataclass(frozen=True)
class Mention:
    quote_text: str
    timestamp: datetime | None = None
    source_url: str | None = None


@dataclass(frozen=True)
class Quote:
    id: int
    text: str
    mentions: int
    timestamps: tuple[datetime, ...] = ()

    @property
    def length(self) -> int:
        """Number of whitespace-separated surface words."""
        return len(self.text.split())


@dataclass(frozen=True)
class QuoteSet:
    quotes: tuple[Quote, ...]
    total_mentions: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "total_mentions", sum(q.mentions for q in self.quotes))

    def __len__(self) -> int:
        return len(self.quotes)

    def __iter__(self) -> Iterator[Quote]:
        return iter(self.quotes)

    def __getitem__(self, quote_id: int) -> Quote:
        return self.quotes[quote_id]


def _parse_timestamp(raw: str) -> datetime:
    raw = raw.strip()
    for fmt in ("%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d"):
        try:
            return datetime.strptime(raw, fmt)
        except ValueError:
            continue
    raise ValueError(f"unparseable timestamp: {raw!r}")


def _decode_lines(reader: IO) -> Iterator[str]:
    for line in reader:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line.rstrip("\n")


def _parse_memetracker(lines: Iterable[str]) -> Iterator[tuple[int, Mention | None]]:
    """Yield (line_number, mention) pairs; malformed blocks yield (lineno, None)."""
    url: str | None = None
    stamp: datetime | None = None
    block_start = 1
    in_block = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            url, stamp, in_block = None, None, False
            continue
        if not in_block:
            block_start = lineno
            in_block = True
        tag, _, rest = line.partition("\t")
        try:
            if tag == "P":
                url = rest.strip()
            elif tag == "T":
                stamp = _parse_timestamp(rest)
            elif tag == "Q":
                text = canonicalize(rest)
                if not text:
                    raise ValueError("empty quote text")
                yield lineno, Mention(text, timestamp=stamp, source_url=url)
            elif tag == "L":
                pass  # hyperlinks are parsed and discarded
            else:
                raise ValueError(f"unknown record tag {tag!r}")
        except ValueError:
            yield (block_start if tag == "T" else lineno), None


def _parse_tsv(lines: Iterable[str]) -> Iterator[tuple[int, Mention | None]]:
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        try:
            text = canonicalize(parts[0])
            if not text or len(parts) < 2:
                raise ValueError("missing quote text or count")
            count = int(parts[1])
            if count < 1:
                raise ValueError("count must be positive")
            stamps: list[datetime | None] = [None] * count
            if len(parts) >= 3 and parts[2].strip():
                raw = [s for s in parts[2].split(",") if s.strip()]
                if len(raw) != count:
                    raise ValueError("timestamp arity does not match count")
                stamps = [_parse_timestamp(s) for s in raw]
        except ValueError:
            yield lineno, None
            continue
        for stamp in stamps:
            yield lineno, Mention(text, timestamp=stamp)


def parse_mention_stream(reader: IO, format: str = "memetracker-records") -> list[Mention]:
    """Parse a byte or text stream into mentions.

    Malformed records are skipped and counted; more than 10% malformed
    records raises :class:`FormatError` carrying the first failing line.
    """
    lines = _decode_lines(reader)
    if format in ("memetracker-records", "memetracker"):
        records = _parse_memetracker(lines)
    elif format == "tsv":
        records = _parse_tsv(lines)
    else:
        raise DomainError(f"unknown format: {format!r}")

    mentions: list[Mention] = []
    n_bad = 0
    n_records = 0
    first_bad: int | None = None
    for lineno, mention in records:
        n_records += 1
        if mention is None:
            n_bad += 1
            if first_bad is None:
                first_bad = lineno
        else:
            mentions.append(mention)
    if n_records and n_bad / n_records > MALFORMED_TOLERANCE:
        raise FormatError(
            f"{n_bad} of {n_records} records malformed", line=first_bad
        )
    return mentions


def aggregate(mentions: Sequence[Mention], min_mentions: int = 5) -> QuoteSet:
    """Group mentions by exact canonical text, dropping rare quotes.

    Quotes keep their timestamps only when every mention carries one;
    timestamps are sorted ascending.
    """
    if min_mentions < 1:
        raise DomainError("min_mentions must be >= 1")
    groups: dict[str, list[Mention]] = {}
    for m in mentions:
        text = canonicalize(m.quote_text)
        if not text:
            continue
        groups.setdefault(text, []).append(m)

    kept = [(text, ms) for text, ms in groups.items() if len(ms) >= min_mentions]
    # Deterministic dense ids: most-mentioned first, text as tie break.
    kept.sort(key=lambda item: (-len(item[1]), item[0]))
    quotes = []
    for qid, (text, ms) in enumerate(kept):
        stamps: tuple[datetime, ...] = ()
        if all(m.timestamp is not None for m in ms):
            stamps = tuple(sorted(m.timestamp for m in ms))
        quotes.append(Quote(id=qid, text=text, mentions=len(ms), timestamps=stamps))
    return QuoteSet(quotes=tuple(quotes))


def expand_mentions(qs: QuoteSet) -> list[Mention]:
    """Inverse of :func:`aggregate` up to mention ordering."""
    out = []
    for q in qs:
        stamps = q.timestamps if q.timestamps else (None,) * q.mentions
        for s in stamps:
            out.append(Mention(q.text, timestamp=s))
    return out


def write_tsv(qs: QuoteSet, writer: IO) -> None:
    """Serialize a QuoteSet in the canonical TSV format."""
    for q in qs:
        line = f"{q.text}\t{q.mentions}"
        if q.timestamps:
            line += "\t" + ",".join(t.strftime("%Y-%m-%dT%H:%M:%S") for t in q.timestamps)
        writer.write(line + "\n")


def read_tsv(reader: IO, min_mentions: int = 1) -> QuoteSet:
    """Parse + aggregate a canonical TSV stream in one step."""
    return aggregate(parse_mention_stream(reader, format="tsv"), min_mentions=min_mentions)
