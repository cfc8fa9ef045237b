"""Pipeline driver: every stage is a subcommand writing file artifacts.

Artifacts are plain files under ``--out-dir`` so the pipeline stays
resumable and diff-able.  Every artifact starts with a ``#`` comment line
naming the producing subcommand and the config digest; readers here skip
leading ``#`` lines.  Exit codes: 0 success, 2 config error, 3 missing
prerequisite artifact, 4 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import (
    __version__,
    communities,
    corpus,
    evalstats,
    metrics,
    morphsim,
    mutation,
    simgraph,
    subfam,
    textprep,
)
from .exceptions import (
    ConfigError,
    DomainError,
    FormatError,
    MissingArtifactError,
    QuotefamError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_DATA = 4

_QUANTILE_DEFAULTS = {
    "term_stability": 20,
    "quote_stability_length": 10,
    "quote_stability_mentions": 30,
    "entropy": 10,
    "rates": 15,
}


def _config_digest(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _header(subcommand: str, digest: str) -> str:
    return f"# produced-by={subcommand} config={digest}\n"


def _file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, subcommand: str, config: dict, digest: str,
                    input_digest: str | None) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "config_digest": digest,
        "input_digest": input_digest,
        "quotefam_version": __version__,
    }
    path = out_dir / f"manifest_{subcommand}.json"
    with open(path, "w") as fh:
        fh.write(_header(subcommand, digest))
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _read_data_lines(path: Path) -> list[str]:
    with open(path) as fh:
        return [
            line.rstrip("\n")
            for line in fh
            if not line.startswith("# produced-by=")
        ]


def _load_json_artifact(path: Path):
    text = "\n".join(_read_data_lines(path))
    return json.loads(text)


def _require(path: Path, produced_by: str):
    if not path.exists():
        raise MissingArtifactError(
            f"missing artifact {path.name}; run the `{produced_by}` subcommand first"
        )
    return path


def _load_quotes(out_dir: Path) -> corpus.QuoteSet:
    path = _require(out_dir / "quotes.tsv", "families")
    buf = io.StringIO("\n".join(_read_data_lines(path)) + "\n")
    return corpus.read_tsv(buf, min_mentions=1)


def _load_families(out_dir: Path, name: str = "families.jsonl"):
    path = _require(out_dir / name, "families" if name == "families.jsonl" else "subfamilies")
    return [json.loads(line) for line in _read_data_lines(path) if line.strip()]


# --------------------------------------------------------------------------
# subcommands


def _cmd_families(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = _args_config(args)
    digest = _config_digest(config)
    input_path = Path(args.input)
    if not input_path.exists():
        raise ConfigError(f"input: no such file: {args.input}")
    with open(input_path, "rb") as fh:
        mentions = corpus.parse_mention_stream(fh, format=args.format)
    qs = corpus.aggregate(mentions, min_mentions=args.min_mentions)
    index = textprep.build_index(qs)
    graph = simgraph.build_graph(
        qs, index, threshold=args.threshold, min_shared=args.min_shared_words
    )
    partition = communities.detect_families(graph, seed=args.seed)
    families = communities.families_from_partition(partition, qs)
    families = communities.filter_families(
        families, qs, min_words=args.min_words, english_check=args.english_check
    )

    with open(out_dir / "quotes.tsv", "w") as fh:
        fh.write(_header("families", digest))
        corpus.write_tsv(qs, fh)
    with open(out_dir / "graph.tsv", "w") as fh:
        simgraph.write_edge_list(graph, fh, header=_header("families", digest))
    with open(out_dir / "families.jsonl", "w") as fh:
        fh.write(_header("families", digest))
        for fam in families:
            record = {
                "family_id": fam.id,
                "quotes": [
                    {"id": qid, "text": qs[qid].text, "mentions": qs[qid].mentions}
                    for qid in fam.quote_ids
                ],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    _write_manifest(out_dir, "families", config, digest, _file_digest(input_path))
    return EXIT_OK


def _cmd_subfamilies(args) -> int:
    out_dir = Path(args.out_dir)
    config = _args_config(args)
    digest = _config_digest(config)
    records = _load_families(out_dir)
    with open(out_dir / "subfamilies.jsonl", "w") as fh:
        fh.write(_header("subfamilies", digest))
        for record in records:
            quotes = record["quotes"]
            ids = [q["id"] for q in quotes]
            texts = [q["text"] for q in quotes]
            g = subfam.build_edit_graph(ids, texts, max_edit=args.max_edit)
            sub_of = {}
            for sf in subfam.subfamilies(g):
                for qid in sf.quote_ids:
                    sub_of[qid] = sf.id
            out = {
                "family_id": record["family_id"],
                "quotes": [
                    {**q, "subfamily_id": sub_of[q["id"]]} for q in quotes
                ],
            }
            fh.write(json.dumps(out, sort_keys=True) + "\n")
    _write_manifest(out_dir, "subfamilies", config, digest,
                    _file_digest(out_dir / "families.jsonl"))
    return EXIT_OK


def _write_distribution(path: Path, header: str, values: dict[int, int]) -> None:
    with open(path, "w") as fh:
        fh.write(header)
        fh.write("value,count\n")
        for v in sorted(values):
            fh.write(f"{v},{values[v]}\n")


def _counts(values) -> dict[int, int]:
    out: dict[int, int] = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return out


def _family_edit_graphs(records, max_edit=1):
    graphs = []
    for record in records:
        quotes = record["quotes"]
        ids = [q["id"] for q in quotes]
        texts = [q["text"] for q in quotes]
        graphs.append(subfam.build_edit_graph(ids, texts, max_edit=max_edit))
    return graphs


def _cmd_stats(args) -> int:
    out_dir = Path(args.out_dir)
    config = _args_config(args)
    digest = _config_digest(config)
    qs = _load_quotes(out_dir)
    records = _load_families(out_dir, "subfamilies.jsonl")
    header = _header("stats", digest)
    kq = args.quantiles

    fam_sizes = _counts(
        sum(q["mentions"] for q in r["quotes"]) for r in records
    )
    version_counts = _counts(len(r["quotes"]) for r in records)
    mention_counts = _counts(q["mentions"] for r in records for q in r["quotes"])
    _write_distribution(out_dir / "family_size_distribution.csv", header, fam_sizes)
    _write_distribution(out_dir / "version_count_distribution.csv", header, version_counts)
    _write_distribution(out_dir / "mentions_per_quote_distribution.csv", header, mention_counts)

    graphs = _family_edit_graphs(records, max_edit=args.max_edit)
    term_records, quote_s = metrics.stability_records(qs, graphs)

    # Term stability against corpus frequency (mention-weighted occurrences).
    term_freq: dict[str, int] = {}
    for q in qs:
        for t in q.text.split():
            term_freq[t] = term_freq.get(t, 0) + q.mentions
    points = []
    for term, rows in term_records.items():
        f = term_freq[term]
        for s, w in rows:
            points.append((float(f), s, w))
    k = kq or _QUANTILE_DEFAULTS["term_stability"]
    if len(points) >= k:
        curve = metrics.bin_quantiles(points, k)
        with open(out_dir / "term_stability_vs_frequency.csv", "w") as fh:
            metrics.write_curve(curve, fh, header)

    if args.pos_file:
        pos = {}
        for line in _read_data_lines(Path(args.pos_file)):
            term, _, tag = line.partition("\t")
            if tag:
                pos[term] = tag
        rows = [
            (pos[t], s, w)
            for t, rs in term_records.items()
            if t in pos
            for s, w in rs
        ]
        by_tag = metrics.feature_stability(rows)
        with open(out_dir / "term_stability_by_pos.csv", "w") as fh:
            fh.write(header)
            fh.write("tag,stability\n")
            for tag in sorted(by_tag):
                fh.write(f"{tag},{by_tag[tag]:.6f}\n")

    length_points = []
    mention_points = []
    for qid, s in sorted(quote_s.items()):
        w = float(qs[qid].mentions)
        length_points.append((float(qs[qid].length), s, w))
        mention_points.append((w, s, w))
    k = kq or _QUANTILE_DEFAULTS["quote_stability_length"]
    if len(length_points) >= k:
        with open(out_dir / "quote_stability_vs_length.csv", "w") as fh:
            metrics.write_curve(metrics.bin_quantiles(length_points, k), fh, header)
    k = kq or _QUANTILE_DEFAULTS["quote_stability_mentions"]
    if len(mention_points) >= k:
        with open(out_dir / "quote_stability_vs_mentions.csv", "w") as fh:
            metrics.write_curve(metrics.bin_quantiles(mention_points, k), fh, header)

    fam_entropy_points = []
    sub_entropy_points = []
    for record in records:
        mentions = [q["mentions"] for q in record["quotes"]]
        total = sum(mentions)
        fam_entropy_points.append((float(total), metrics.entropy(mentions), 1.0))
        groups: dict[int, list[int]] = {}
        for q in record["quotes"]:
            groups.setdefault(q["subfamily_id"], []).append(q["mentions"])
        for ms in groups.values():
            sub_entropy_points.append((float(sum(ms)), metrics.entropy(ms), 1.0))
    k = kq or _QUANTILE_DEFAULTS["entropy"]
    for name, pts in (
        ("family_entropy_vs_mentions.csv", fam_entropy_points),
        ("subfamily_entropy_vs_mentions.csv", sub_entropy_points),
    ):
        if len(pts) >= k:
            with open(out_dir / name, "w") as fh:
                metrics.write_curve(metrics.bin_quantiles(pts, k), fh, header)

    _write_manifest(out_dir, "stats", config, digest,
                    _file_digest(out_dir / "subfamilies.jsonl"))
    return EXIT_OK


def _replay_all(records, qs) -> list[mutation.MutationEvent]:
    events = []
    for record in records:
        versions = []
        lengths = {}
        sub_of = {}
        for q in record["quotes"]:
            quote = qs[q["id"]]
            versions.append((q["id"], q["mentions"], list(quote.timestamps)))
            lengths[q["id"]] = quote.length
            sub_of[q["id"]] = q["subfamily_id"]
        events.extend(
            mutation.replay_family(record["family_id"], versions, sub_of, lengths)
        )
    return events


def _cmd_rates(args) -> int:
    out_dir = Path(args.out_dir)
    config = _args_config(args)
    digest = _config_digest(config)
    qs = _load_quotes(out_dir)
    records = _load_families(out_dir, "subfamilies.jsonl")
    events = _replay_all(records, qs)
    header = _header("rates", digest)
    with open(out_dir / "events.csv", "w") as fh:
        fh.write(header)
        fh.write("family_id,kind,n,l\n")
        for ev in events:
            channel = mutation.MACRO if ev.kind == mutation.MACRO else mutation.MICRO
            n = ev.covariate("n", channel)
            l = ev.covariate("l", channel)
            fh.write(f"{ev.family_id},{ev.kind},{n:.6f},{l:.6f}\n")
    if events:
        k = args.quantiles or _QUANTILE_DEFAULTS["rates"]
        for channel in (mutation.MICRO, mutation.MACRO):
            for cov in ("n", "l"):
                curve = mutation.binned_rates(
                    events, covariate=cov, k=k, channel=channel
                )
                name = f"rate_{channel}_vs_{cov}.csv"
                with open(out_dir / name, "w") as fh:
                    metrics.write_curve(curve, fh, header)
    _write_manifest(out_dir, "rates", config, digest,
                    _file_digest(out_dir / "subfamilies.jsonl"))
    return EXIT_OK


def _read_curve_points(path: Path) -> list[tuple[float, float]]:
    rows = _read_data_lines(path)
    out = []
    for line in rows[1:]:
        parts = line.split(",")
        out.append((float(parts[0]), float(parts[1])))
    return out


def _cmd_fit(args) -> int:
    out_dir = Path(args.out_dir)
    config = _args_config(args)
    digest = _config_digest(config)
    fits = {}
    for channel in ("micro", "macro"):
        n_path = _require(out_dir / f"rate_{channel}_vs_n.csv", "rates")
        pts = [(x, y) for x, y in _read_curve_points(n_path) if x > 0 and y > 0]
        if len(pts) >= 2:
            fit = mutation.fit_power_law(pts)
            fits[f"{channel}_n"] = {
                "form": fit.form, "params": list(fit.params), "rss": fit.rss
            }
        l_path = _require(out_dir / f"rate_{channel}_vs_l.csv", "rates")
        pts = _read_curve_points(l_path)
        if len(pts) >= 3:
            fit = mutation.fit_length_forms(pts, form=channel)
            fits[f"{channel}_l"] = {
                "form": fit.form, "params": list(fit.params), "rss": fit.rss
            }
    with open(out_dir / "fits.json", "w") as fh:
        fh.write(_header("fit", digest))
        json.dump(fits, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out_dir, "fit", config, digest, None)
    return EXIT_OK


def _power_law_targets(rng: np.random.Generator, n_families: int):
    """Mention budgets from a discrete power law (exponent ~2.2, floor 5)
    with seed lengths spread over the observed quote-length range."""
    u = rng.random(n_families)
    n = np.floor(5.0 * (1.0 - u) ** (-1.0 / 1.2)).astype(int)
    n = np.clip(n, 5, 10000)
    l0 = rng.integers(8, 31, size=n_families)
    return [(int(a), int(b)) for a, b in zip(l0, n)]


def _model_from_fits(fits: dict) -> morphsim.RateModel:
    def curve(key):
        spec = fits[key]
        return mutation.RateCurveFit(
            form=spec["form"], params=tuple(spec["params"]), rss=spec["rss"]
        )

    return morphsim.RateModel.from_fits(
        micro_l=curve("micro_l"),
        micro_n=curve("micro_n"),
        macro_l=curve("macro_l"),
        macro_n=curve("macro_n"),
    )


def _cmd_simulate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = _args_config(args)
    digest = _config_digest(config)
    if args.use_default_rates:
        model = morphsim.RateModel.published_defaults()
    elif args.zero_rates:
        model = morphsim.RateModel.constant(1e-300, 1e-300)
    else:
        fits_path = out_dir / "fits.json"
        if not fits_path.exists():
            raise MissingArtifactError(
                "missing artifact fits.json; run the `fit` subcommand first "
                "(or pass --use-default-rates)"
            )
        fits = _load_json_artifact(fits_path)
        missing = {"micro_l", "micro_n", "macro_l", "macro_n"} - set(fits)
        if missing:
            raise MissingArtifactError(
                f"fits.json lacks {sorted(missing)}; re-run `fit` or pass "
                "--use-default-rates"
            )
        model = _model_from_fits(fits)

    fam_path = out_dir / "subfamilies.jsonl"
    if fam_path.exists() and not args.n_families:
        records = _load_families(out_dir, "subfamilies.jsonl")
        targets = []
        for record in records:
            quotes = record["quotes"]
            top = max(quotes, key=lambda q: (q["mentions"], -q["id"]))
            l0 = max(1, len(top["text"].split()))
            targets.append((l0, sum(q["mentions"] for q in quotes)))
    else:
        rng = np.random.default_rng(args.seed)
        targets = _power_law_targets(rng, args.n_families or 100)

    sim_corpus, summary = morphsim.simulate_corpus(
        targets, model, seed=args.seed, min_trim_len=args.min_trim_len
    )
    header = _header("simulate", digest)
    with open(out_dir / "sim_events.csv", "w") as fh:
        fh.write(header)
        fh.write("family_id,kind,n,l\n")
        for ev in sim_corpus.all_events():
            channel = mutation.MACRO if ev.kind == mutation.MACRO else mutation.MICRO
            fh.write(
                f"{ev.family_id},{ev.kind},{ev.covariate('n', channel):.6f},"
                f"{ev.covariate('l', channel):.6f}\n"
            )
    payload = {
        "n_families": len(sim_corpus.families),
        "n_versions": summary["n_versions"],
        "n_subfamilies": summary["n_subfamilies"],
        "size_histogram": {str(k): v for k, v in summary["size_histogram"].items()},
        "per_family": [
            {"n_versions": f.n_versions, "n_subfamilies": f.n_subfamilies,
             "total_mentions": f.total_mentions}
            for f in sim_corpus.families
        ],
    }
    for key in ("family_entropy_curve", "subfamily_entropy_curve"):
        if key in summary:
            payload[key] = [
                {"x_mean": b.x_mean, "y": b.y, "ci_low": b.ci_low,
                 "ci_high": b.ci_high, "n": b.n_points}
                for b in summary[key].bins
            ]
    with open(out_dir / "sim_summary.json", "w") as fh:
        fh.write(header)
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out_dir, "simulate", config, digest, None)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = _args_config(args)
    digest = _config_digest(config)
    result = {}
    judgments_path = Path(args.judgments)
    if not judgments_path.exists():
        raise ConfigError(f"judgments: no such file: {args.judgments}")
    with open(judgments_path) as fh:
        judged = evalstats.load_judgments(fh)
    result["retrieval"] = evalstats.precision_relative_recall(judged)
    if args.judgments_b:
        with open(args.judgments_b) as fh:
            judged_b = evalstats.load_judgments(fh)
        marks_a = [m for fam in judged for m in fam.list_one + fam.list_two]
        marks_b = [m for fam in judged_b for m in fam.list_one + fam.list_two]
        result["cohen_kappa"] = evalstats.cohen_kappa(marks_a, marks_b)
    if args.scores_a and args.scores_b:
        sa = [float(x) for x in _read_data_lines(Path(args.scores_a))]
        sb = [float(x) for x in _read_data_lines(Path(args.scores_b))]
        result["randomization_p_value"] = evalstats.approx_randomization_test(
            sa, sb, iterations=args.iterations, seed=args.seed
        )
    with open(out_dir / "evaluation.json", "w") as fh:
        fh.write(_header("evaluate", digest))
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out_dir, "evaluate", config, digest,
                    _file_digest(judgments_path))
    return EXIT_OK


_REPORT_SECTIONS = {
    "corpus": ["quotes.tsv"],
    "graph": ["graph.tsv"],
    "families": ["families.jsonl"],
    "subfamilies": ["subfamilies.jsonl"],
    "distributions": [
        "family_size_distribution.csv",
        "version_count_distribution.csv",
        "mentions_per_quote_distribution.csv",
    ],
    "curves": [
        "term_stability_vs_frequency.csv",
        "quote_stability_vs_length.csv",
        "quote_stability_vs_mentions.csv",
        "family_entropy_vs_mentions.csv",
        "subfamily_entropy_vs_mentions.csv",
    ],
    "rates": [
        "events.csv",
        "rate_micro_vs_n.csv",
        "rate_micro_vs_l.csv",
        "rate_macro_vs_n.csv",
        "rate_macro_vs_l.csv",
    ],
    "fits": ["fits.json"],
    "simulation": ["sim_summary.json", "sim_events.csv"],
    "evaluation": ["evaluation.json"],
}


def _cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    config = _args_config(args)
    digest = _config_digest(config)
    report: dict = {"sections": {}}
    any_absent = False
    for section, names in _REPORT_SECTIONS.items():
        present = [n for n in names if (out_dir / n).exists()]
        absent = [n for n in names if not (out_dir / n).exists()]
        entry: dict = {"present": present, "absent": absent}
        if absent:
            any_absent = True
        report["sections"][section] = entry
    if (out_dir / "families.jsonl").exists():
        records = _load_families(out_dir)
        report["n_families"] = len(records)
        report["n_quotes_in_families"] = sum(len(r["quotes"]) for r in records)
    if (out_dir / "subfamilies.jsonl").exists():
        records = _load_families(out_dir, "subfamilies.jsonl")
        report["n_subfamilies"] = sum(
            len({q["subfamily_id"] for q in r["quotes"]}) for r in records
        )
    if (out_dir / "fits.json").exists():
        report["fits"] = _load_json_artifact(out_dir / "fits.json")
    if (out_dir / "sim_summary.json").exists():
        sim = _load_json_artifact(out_dir / "sim_summary.json")
        report["simulation"] = {
            k: sim[k] for k in ("n_families", "n_versions", "n_subfamilies")
            if k in sim
        }
    if (out_dir / "evaluation.json").exists():
        report["evaluation"] = _load_json_artifact(out_dir / "evaluation.json")
    with open(out_dir / "report.json", "w") as fh:
        fh.write(_header("report", digest))
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_MISSING if any_absent else EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _args_config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _validate(args) -> None:
    checks = [
        ("threshold", lambda v: 0.0 < v < 1.0, "must lie strictly between 0 and 1"),
        ("min_shared_words", lambda v: v >= 1, "must be >= 1"),
        ("min_mentions", lambda v: v >= 1, "must be >= 1"),
        ("min_words", lambda v: v >= 0, "must be >= 0"),
        ("max_edit", lambda v: v >= 1, "must be >= 1"),
        ("quantiles", lambda v: v is None or v >= 1, "must be >= 1"),
        ("threads", lambda v: v is None or v >= 1, "must be >= 1"),
        ("min_trim_len", lambda v: v >= 1, "must be >= 1"),
        ("iterations", lambda v: v >= 100, "must be >= 100"),
        ("n_families", lambda v: v is None or v >= 1, "must be >= 1"),
    ]
    for name, ok, message in checks:
        if hasattr(args, name) and not ok(getattr(args, name)):
            raise ConfigError(f"{name}: {message}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", required=True, help="artifact directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None,
                        help="cap worker threads (default: machine parallelism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quotefam",
        description="Quotation family reconstruction, statistics and simulation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("families", help="corpus -> graph -> communities -> filter")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["memetracker", "tsv"], default="memetracker")
    p.add_argument("--threshold", type=float, default=simgraph.DEFAULT_THRESHOLD)
    p.add_argument("--min-shared-words", type=int, default=simgraph.DEFAULT_MIN_SHARED)
    p.add_argument("--min-mentions", type=int, default=5)
    p.add_argument("--min-words", type=int, default=5)
    p.add_argument("--english-check", action=argparse.BooleanOptionalAction, default=True)
    _add_common(p)
    p.set_defaults(func=_cmd_families)

    p = sub.add_parser("subfamilies", help="edit graphs and connected components")
    p.add_argument("--max-edit", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_subfamilies)

    p = sub.add_parser("stats", help="distributions, stability and entropy curves")
    p.add_argument("--max-edit", type=int, default=1)
    p.add_argument("--quantiles", type=int, default=None,
                   help="override per-figure quantile defaults (20/30/15/10)")
    p.add_argument("--pos-file", default=None, help="TSV term<TAB>tag annotations")
    _add_common(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("rates", help="replay families into mutation events")
    p.add_argument("--quantiles", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("fit", help="fit parametric rate curves")
    _add_common(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("simulate", help="generative family morphogenesis")
    p.add_argument("--n-families", type=int, default=None)
    p.add_argument("--min-trim-len", type=int, default=morphsim.DEFAULT_MIN_TRIM_LEN)
    p.add_argument("--use-default-rates", action="store_true",
                   help="use the published fitted curves instead of fits.json")
    p.add_argument("--zero-rates", action="store_true",
                   help="degenerate model: every step is a perfect copy")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("evaluate", help="clustering comparison statistics")
    p.add_argument("--judgments", required=True)
    p.add_argument("--judgments-b", default=None,
                   help="second annotator for Cohen's kappa")
    p.add_argument("--scores-a", default=None)
    p.add_argument("--scores-b", default=None)
    p.add_argument("--iterations", type=int, default=10000)
    _add_common(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("report", help="consolidated artifact summary")
    _add_common(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        _validate(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingArtifactError as exc:
        print(f"missing prerequisite: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (FormatError, DomainError, QuotefamError, OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
