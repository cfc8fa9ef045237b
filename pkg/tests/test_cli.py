import importlib.resources
import json
from pathlib import Path

import pytest

from quotefam import cli

SECOND_FAMILY = [
    "we have nothing to fear but fear itself\t9",
    "we have nothing to fear but fear\t4",
    "nothing to fear but fear itself my friends\t3",
]


@pytest.fixture()
def input_tsv(tmp_path):
    fixture = importlib.resources.files("quotefam") / "data" / "fiorina_family.tsv"
    body = fixture.read_text()
    path = tmp_path / "input.tsv"
    path.write_text(body + "\n".join(SECOND_FAMILY) + "\n")
    return path


def run(args):
    return cli.main([str(a) for a in args])


def data_lines(path):
    return [
        l for l in path.read_text().splitlines() if not l.startswith("# produced-by=")
    ]


def test_families_subfamilies_pipeline(input_tsv, tmp_path):
    out = tmp_path / "out"
    assert run([
        "families", "--input", input_tsv, "--format", "tsv",
        "--min-mentions", "1", "--out-dir", out,
    ]) == 0
    for name in ("quotes.tsv", "graph.tsv", "families.jsonl", "manifest_families.json"):
        assert (out / name).exists()
        assert (out / name).read_text().startswith("# produced-by=families")

    assert run(["subfamilies", "--out-dir", out]) == 0
    records = [json.loads(l) for l in data_lines(out / "subfamilies.jsonl")]
    n_subfams = sum(len({q["subfamily_id"] for q in r["quotes"]}) for r in records)
    n_quotes = sum(len(r["quotes"]) for r in records)
    assert n_quotes == 10
    assert n_subfams >= 4  # three in the first family, at least one more


def test_full_pipeline_stats_rates_fit_simulate_report(input_tsv, tmp_path):
    out = tmp_path / "out"
    run(["families", "--input", input_tsv, "--format", "tsv",
         "--min-mentions", "1", "--out-dir", out])
    run(["subfamilies", "--out-dir", out])

    assert run(["stats", "--out-dir", out, "--quantiles", "2"]) == 0
    assert (out / "family_size_distribution.csv").exists()
    assert (out / "quote_stability_vs_length.csv").exists()
    curve = data_lines(out / "quote_stability_vs_length.csv")
    assert curve[0] == "x_mean,y,ci_low,ci_high,n"

    assert run(["rates", "--out-dir", out]) == 0
    events = data_lines(out / "events.csv")
    assert events[0] == "family_id,kind,n,l"
    assert len(events) > 1
    assert (out / "rate_micro_vs_n.csv").exists()

    assert run(["fit", "--out-dir", out]) == 0
    fits = json.loads("\n".join(data_lines(out / "fits.json")))
    assert isinstance(fits, dict)

    assert run([
        "simulate", "--out-dir", out, "--use-default-rates",
        "--n-families", "8", "--seed", "1",
    ]) == 0
    summary = json.loads("\n".join(data_lines(out / "sim_summary.json")))
    assert summary["n_families"] == 8
    assert (out / "sim_events.csv").exists()

    code = run(["report", "--out-dir", out])
    assert code in (0, 3)
    report = json.loads("\n".join(data_lines(out / "report.json")))
    assert report["n_families"] >= 2
    assert "simulation" in report


def test_families_rerun_is_byte_identical(input_tsv, tmp_path):
    out = tmp_path / "out"
    args = ["families", "--input", input_tsv, "--format", "tsv",
            "--min-mentions", "1", "--out-dir", out]
    assert run(args) == 0
    names = ["quotes.tsv", "graph.tsv", "families.jsonl", "manifest_families.json"]
    first = {n: (out / n).read_bytes() for n in names}
    assert run(args) == 0
    for n in names:
        assert (out / n).read_bytes() == first[n]


def test_simulate_rerun_is_byte_identical(tmp_path):
    out = tmp_path / "sim"
    args = ["simulate", "--out-dir", out, "--use-default-rates",
            "--n-families", "5", "--seed", "3"]
    assert run(args) == 0
    first = (out / "sim_summary.json").read_bytes()
    assert run(args) == 0
    assert (out / "sim_summary.json").read_bytes() == first


def test_config_error_exit_code(input_tsv, tmp_path):
    assert run([
        "families", "--input", input_tsv, "--format", "tsv",
        "--threshold", "1.5", "--out-dir", tmp_path / "x",
    ]) == 2
    assert run([
        "families", "--input", tmp_path / "missing.tsv", "--format", "tsv",
        "--out-dir", tmp_path / "x",
    ]) == 2
    assert run(["stats", "--out-dir", tmp_path / "y", "--quantiles", "0"]) == 2
    # argparse-level error: unknown subcommand
    assert run(["bogus"]) == 2


def test_missing_prerequisite_exit_code(tmp_path):
    assert run(["subfamilies", "--out-dir", tmp_path / "empty"]) == 3
    assert run(["fit", "--out-dir", tmp_path / "empty"]) == 3
    assert run(["simulate", "--out-dir", tmp_path / "empty2"]) == 3


def test_data_error_exit_code(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("no tab separated count here\n")
    assert run([
        "families", "--input", bad, "--format", "tsv",
        "--out-dir", tmp_path / "out",
    ]) == 4


def test_evaluate_subcommand(tmp_path):
    judgments = tmp_path / "judgments.tsv"
    judgments.write_text(
        "f1\t1\tquote a\trelevant\n"
        "f1\t1\tquote b\tnot_relevant\n"
        "f1\t2\tquote c\trelevant\n"
    )
    out = tmp_path / "eval"
    assert run(["evaluate", "--judgments", judgments, "--out-dir", out]) == 0
    result = json.loads("\n".join(data_lines(out / "evaluation.json")))
    assert result["retrieval"]["precision"] == pytest.approx(0.5)
    assert result["retrieval"]["relative_recall"] == pytest.approx(0.5)

    scores_a = tmp_path / "a.txt"
    scores_b = tmp_path / "b.txt"
    scores_a.write_text("\n".join(str(0.6 + 0.01 * k) for k in range(20)))
    scores_b.write_text("\n".join(str(0.4 + 0.01 * k) for k in range(20)))
    assert run([
        "evaluate", "--judgments", judgments, "--scores-a", scores_a,
        "--scores-b", scores_b, "--iterations", "500", "--out-dir", out,
    ]) == 0
    result = json.loads("\n".join(data_lines(out / "evaluation.json")))
    assert 0.0 < result["randomization_p_value"] <= 1.0

    assert run([
        "evaluate", "--judgments", tmp_path / "nope.tsv", "--out-dir", out,
    ]) == 2
