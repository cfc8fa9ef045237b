import io

import pytest

from quotefam import corpus
from quotefam.exceptions import FormatError

MEMETRACKER_SAMPLE = """\
P\thttp://example.com/a
T\t2008-09-10 12:00:00
Q\tThe Republican  Party will not stand by
Q\tanother quote here entirely

P\thttp://example.com/b
T\t2008-09-11 08:30:00
Q\tthe republican party will not stand by
"""


def test_canonicalize_lowercase_and_whitespace():
    assert corpus.canonicalize("  The  QUICK\tbrown\nfox ") == "the quick brown fox"


def test_parse_memetracker_blocks():
    mentions = corpus.parse_mention_stream(
        io.StringIO(MEMETRACKER_SAMPLE), format="memetracker-records"
    )
    assert len(mentions) == 3
    texts = [m.quote_text for m in mentions]
    assert texts.count("the republican party will not stand by") == 2
    assert mentions[0].timestamp.year == 2008
    assert mentions[0].source_url == "http://example.com/a"


def test_parse_memetracker_accepts_bytes():
    mentions = corpus.parse_mention_stream(
        io.BytesIO(MEMETRACKER_SAMPLE.encode()), format="memetracker"
    )
    assert len(mentions) == 3


def test_malformed_fraction_raises_with_line():
    bad = "Q\tgood quote\nX\tjunk\nX\tmore junk\n"
    with pytest.raises(FormatError) as exc:
        corpus.parse_mention_stream(io.StringIO(bad), format="memetracker")
    assert exc.value.line == 2


def test_malformed_below_tolerance_skipped():
    lines = ["Q\tquote number %d" % i for i in range(20)] + ["X\tjunk"]
    mentions = corpus.parse_mention_stream(
        io.StringIO("\n".join(lines)), format="memetracker"
    )
    assert len(mentions) == 20


def test_parse_tsv_expands_counts():
    data = "hello world\t3\nsecond quote\t1\n"
    mentions = corpus.parse_mention_stream(io.StringIO(data), format="tsv")
    assert len(mentions) == 4
    assert sum(1 for m in mentions if m.quote_text == "hello world") == 3


def test_parse_tsv_timestamps_must_match_count():
    data = "hello world\t2\t2008-09-10T12:00:00\n"
    with pytest.raises(FormatError):
        corpus.parse_mention_stream(io.StringIO(data), format="tsv")


def test_aggregate_orders_by_mentions_then_text():
    mentions = (
        [corpus.Mention("bbb quote")] * 3
        + [corpus.Mention("aaa quote")] * 3
        + [corpus.Mention("ccc quote")] * 5
    )
    qs = corpus.aggregate(mentions, min_mentions=1)
    assert [q.text for q in qs] == ["ccc quote", "aaa quote", "bbb quote"]
    assert [q.id for q in qs] == [0, 1, 2]
    assert qs.total_mentions == 11


def test_aggregate_min_mentions_floor():
    mentions = [corpus.Mention("rare quote")] * 4 + [corpus.Mention("common quote")] * 5
    qs = corpus.aggregate(mentions)  # default floor is 5
    assert [q.text for q in qs] == ["common quote"]


def test_aggregate_drops_timestamps_unless_complete():
    mentions = [
        corpus.Mention("hello there", timestamp=None),
        corpus.Mention("hello there", timestamp=corpus._parse_timestamp("2008-09-10")),
    ]
    qs = corpus.aggregate(mentions, min_mentions=1)
    assert qs[0].timestamps == ()


def test_tsv_round_trip():
    data = "hello world\t2\t2008-09-10T12:00:00,2008-09-11T01:02:03\nother one\t1\n"
    qs = corpus.read_tsv(io.StringIO(data))
    buf = io.StringIO()
    corpus.write_tsv(qs, buf)
    qs2 = corpus.read_tsv(io.StringIO(buf.getvalue()))
    assert [(q.text, q.mentions, q.timestamps) for q in qs] == [
        (q.text, q.mentions, q.timestamps) for q in qs2
    ]


def test_expand_mentions_inverts_aggregate():
    mentions = [corpus.Mention("a b c")] * 2 + [corpus.Mention("d e f")]
    qs = corpus.aggregate(mentions, min_mentions=1)
    back = corpus.expand_mentions(qs)
    assert sorted(m.quote_text for m in back) == ["a b c", "a b c", "d e f"]


def test_quote_length():
    qs = corpus.aggregate([corpus.Mention("one two three")], min_mentions=1)
    assert qs[0].length == 3
