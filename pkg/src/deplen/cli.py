"""Command-line entry point.

Subcommands: parse, decompose, variants, strategies, features, fit,
classify, synth, report-all. Progress goes to stderr; data products only
under --out. Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, analysis, constituency, features, treebank, variants
from .seeding import derive_rng

log = logging.getLogger("deplen")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p):
    p.add_argument("--config", help="flat key=value config file; flags override")
    p.add_argument("--corpus", help="input corpus path")
    p.add_argument("--format", default="conllu", choices=["conllu", "tsv"])
    p.add_argument("--cap", type=int, default=variants.DEFAULT_CAP,
                   help="variant sampling ceiling per sentence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--zscore", default="fold", choices=["fold", "global"])
    p.add_argument("--random-draws", type=int, default=10,
                   help="seeded draws per sentence for random/least-effort curves")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="output directory")
    p.add_argument("--exclude-punct", action="store_true",
                   help="drop punctuation tokens before all distance metrics")
    p.add_argument("--convention", default="intervening",
                   choices=["intervening", "positional"])


def build_parser() -> _Parser:
    parser = _Parser(prog="deplen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ["parse", "decompose", "variants", "strategies", "features",
                 "fit", "classify", "report-all"]:
        _add_common(sub.add_parser(name))
    synth = sub.add_parser("synth")
    _add_common(synth)
    synth.add_argument("--sentences", type=int, default=1000)
    synth.add_argument("--p-least-effort", type=float, default=1.0)
    synth.add_argument("--noise-temperature", type=float, default=0.0)
    return parser


def _apply_config_file(args, parser):
    if not args.config:
        return args
    path = Path(args.config)
    if not path.exists():
        raise DataError(f"config file not found: {path}")
    overrides = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        overrides[key.replace("-", "_")] = value
    # flags explicitly given on the command line win over file values
    defaults = vars(parser.parse_args([args.command]))
    for key, value in overrides.items():
        if key not in defaults:
            raise DataError(f"unknown config key: {key}")
        if getattr(args, key) == defaults[key]:
            cur = defaults[key]
            if isinstance(cur, bool):
                value = value.lower() in ("1", "true", "yes")
            elif isinstance(cur, int):
                value = int(value)
            elif isinstance(cur, float):
                value = float(value)
            setattr(args, key, value)
    return args


def _load_corpus(args):
    if not args.corpus:
        raise UsageError("--corpus is required for this subcommand")
    path = Path(args.corpus)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    raw = path.read_bytes()
    trees, diagnostics = treebank.parse_corpus(
        raw.decode("utf-8"), args.format)
    if args.exclude_punct:
        trees = [treebank.strip_punct(t) for t in trees]
    for d in diagnostics:
        log.warning("line %d: %s (block skipped)", d.line, d.reason)
    log.info("parsed %d sentences, %d blocks skipped", len(trees), len(diagnostics))
    return trees, diagnostics, hashlib.sha256(raw).hexdigest()


def _outdir(args) -> Path:
    if not args.out:
        raise UsageError("--out is required for this subcommand")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, args, corpus_hash, extra):
    resolved = {k: v for k, v in vars(args).items() if k != "config"}
    manifest = {"version": __version__, "config": resolved,
                "corpus_sha256": corpus_hash, **extra}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands

def cmd_parse(args):
    trees, diagnostics, corpus_hash = _load_corpus(args)
    out = _outdir(args)
    with (out / "parsed.conllu").open("w") as f:
        for i, tree in enumerate(trees):
            f.write(treebank.to_conllu(tree, sent_id=f"s{i + 1}"))
            f.write("\n")
    _write_csv(out / "diagnostics.csv", ["line", "reason"],
               [(d.line, d.reason) for d in diagnostics])
    _write_manifest(out, args, corpus_hash,
                    {"sentences": len(trees), "skipped_blocks": len(diagnostics)})
    return EXIT_OK


def _decomposed(args):
    trees, diagnostics, corpus_hash = _load_corpus(args)
    corpus = analysis.decompose_corpus(trees)
    log.info("eligible %d sentences; skipped: %s", len(corpus.entries), corpus.skipped)
    return corpus, diagnostics, corpus_hash


def cmd_decompose(args):
    corpus, diagnostics, corpus_hash = _decomposed(args)
    out = _outdir(args)
    rows = [(e.sentence_id, e.plan.k, e.plan.verb_index,
             " ".join(map(str, e.plan.lengths))) for e in corpus.entries]
    _write_csv(out / "plans.csv",
               ["sentence_id", "n_constituents", "verb_index", "lengths"], rows)
    _write_manifest(out, args, corpus_hash,
                    {"eligible": len(corpus.entries), "skipped": corpus.skipped,
                     "parse_diagnostics": len(diagnostics)})
    return EXIT_OK


def cmd_variants(args):
    corpus, diagnostics, corpus_hash = _decomposed(args)
    out = _outdir(args)
    with (out / "variants.jsonl").open("w") as f:
        for e in corpus.entries:
            vset = variants.generate_variants(
                e.plan, args.cap, derive_rng(args.seed, e.sentence_id, "variants"))
            for order in (vset.reference_order,) + vset.sampled_variants:
                tree = variants.linearize(e.plan, order)
                record = {
                    "sentence_id": e.sentence_id,
                    "permutation": list(order),
                    "main_verb_dl": constituency.main_verb_dl(e.plan, order, args.convention),
                    "total_dl": constituency.total_dependency_length(tree, args.convention),
                    "tokens": [t.form for t in tree.tokens],
                }
                f.write(json.dumps(record) + "\n")
    _write_manifest(out, args, corpus_hash,
                    {"eligible": len(corpus.entries), "skipped": corpus.skipped})
    return EXIT_OK


def cmd_strategies(args):
    corpus, _, corpus_hash = _decomposed(args)
    out = _outdir(args)
    curves = analysis.strategy_curves(
        corpus, seed=args.seed, random_draws=args.random_draws,
        k_range=(args.k_min, args.k_max), convention=args.convention)
    rows = [(k, strategy, f"{value:.6f}")
            for strategy, per_k in curves.items()
            for k, value in per_k.items()]
    _write_csv(out / "fig4_curves.csv", ["k", "strategy", "mean_normalized_dl"], rows)
    _write_manifest(out, args, corpus_hash, {"eligible": len(corpus.entries)})
    return EXIT_OK


def _dataset(args, corpus):
    return analysis.build_pairwise_dataset(
        corpus, cap=args.cap, seed=args.seed,
        convention=args.convention, jobs=args.jobs)


def cmd_features(args):
    corpus, _, corpus_hash = _decomposed(args)
    out = _outdir(args)
    dataset = _dataset(args, corpus)
    by_k = {}
    for ex in dataset.examples:
        by_k.setdefault(ex.k, []).append(ex)
    for k, group in sorted(by_k.items()):
        header = features.feature_names(k) + ["label", "pair_id"]
        rows = [[*(f"{v:g}" for v in ex.delta), ex.label, ex.pair_id]
                for ex in group]
        _write_csv(out / f"features_k{k}.csv", header, rows)
    _write_manifest(out, args, corpus_hash,
                    {"pairs": len(dataset), "transform_diagnostics": dataset.diagnostics})
    return EXIT_OK


def _regressions(args, dataset):
    tables = {}
    for family, filename in (("deplen", "table1_regression.json"),
                             ("length", "table2_regression.json")):
        per_k = {}
        for k in range(args.k_min, args.k_max + 1):
            per_k[str(k)] = analysis.regression_table(
                dataset, k, family, folds=args.folds, seed=args.seed)
        tables[filename] = per_k
    return tables


def cmd_fit(args):
    corpus, _, corpus_hash = _decomposed(args)
    out = _outdir(args)
    dataset = _dataset(args, corpus)
    for filename, table in _regressions(args, dataset).items():
        (out / filename).write_text(json.dumps(table, indent=2))
    _write_manifest(out, args, corpus_hash, {"pairs": len(dataset)})
    return EXIT_OK


def _write_suite(out: Path, rows):
    for table, filename in (("table3", "table3_accuracy.csv"),
                            ("table4", "table4_accuracy.csv")):
        _write_csv(out / filename,
                   ["predictors", "accuracy_pct", "mcnemar_p_vs_prev"],
                   [(r["predictors"], f"{100 * r['accuracy']:.2f}",
                     "" if r["mcnemar_p"] is None else f"{r['mcnemar_p']:.3g}")
                    for r in rows if r["table"] == table])


def cmd_classify(args):
    corpus, _, corpus_hash = _decomposed(args)
    out = _outdir(args)
    dataset = _dataset(args, corpus)
    try:
        rows = analysis.run_classification_suite(
            dataset, folds=args.folds, seed=args.seed, zscore_mode=args.zscore)
    except analysis.InsufficientDataError as e:
        raise DataError(str(e))
    _write_suite(out, rows)
    _write_manifest(out, args, corpus_hash, {"pairs": len(dataset)})
    return EXIT_OK


def cmd_synth(args):
    out = _outdir(args)
    spec = analysis.SyntheticSpec(
        n_sentences=args.sentences,
        p_least_effort=args.p_least_effort,
        noise_temperature=args.noise_temperature)
    trees = analysis.generate_synthetic_corpus(spec, seed=args.seed)
    with (out / "synthetic.conllu").open("w") as f:
        for i, tree in enumerate(trees):
            f.write(treebank.to_conllu(tree, sent_id=f"synth{i + 1}"))
            f.write("\n")
    _write_manifest(out, args, None, {"sentences": len(trees)})
    return EXIT_OK


def cmd_report_all(args):
    corpus, diagnostics, corpus_hash = _decomposed(args)
    out = _outdir(args)

    ref_hist, var_hist = analysis.constituent_count_histogram(corpus, args.cap)
    _write_csv(out / "fig1_counts.csv", ["k", "reference_pct", "variant_pct"],
               [(k, f"{ref_hist.get(k, 0.0):.4f}", f"{var_hist.get(k, 0.0):.4f}")
                for k in sorted(set(ref_hist) | set(var_hist))])

    profile_rows = []
    for k in range(args.k_min, args.k_max + 1):
        try:
            profile = analysis.position_length_profile(corpus, k)
        except analysis.InsufficientDataError:
            continue
        profile_rows.extend(
            (k, pos + 1, f"{mean:.4f}") for pos, mean in enumerate(profile))
    _write_csv(out / "fig2_profile.csv", ["k", "position", "mean_length"], profile_rows)

    curves = analysis.strategy_curves(
        corpus, seed=args.seed, random_draws=args.random_draws,
        k_range=(args.k_min, args.k_max), convention=args.convention)
    _write_csv(out / "fig4_curves.csv", ["k", "strategy", "mean_normalized_dl"],
               [(k, strategy, f"{value:.6f}")
                for strategy, per_k in curves.items()
                for k, value in per_k.items()])

    dataset = _dataset(args, corpus)
    log.info("pairwise dataset: %d examples", len(dataset))
    for filename, table in _regressions(args, dataset).items():
        (out / filename).write_text(json.dumps(table, indent=2))
    try:
        rows = analysis.run_classification_suite(
            dataset, folds=args.folds, seed=args.seed, zscore_mode=args.zscore)
    except analysis.InsufficientDataError as e:
        raise DataError(str(e))
    _write_suite(out, rows)

    _write_manifest(out, args, corpus_hash, {
        "eligible": len(corpus.entries),
        "skipped": corpus.skipped,
        "parse_diagnostics": len(diagnostics),
        "pairs": len(dataset),
        "corr_sentence_length_vs_constituents":
            analysis.sentence_length_constituent_corr(corpus)
            if len(corpus.entries) >= 2 else None,
    })
    return EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "decompose": cmd_decompose,
    "variants": cmd_variants,
    "strategies": cmd_strategies,
    "features": cmd_features,
    "fit": cmd_fit,
    "classify": cmd_classify,
    "synth": cmd_synth,
    "report-all": cmd_report_all,
}


def main(argv=None) -> int:
    logging.basicConfig(
        stream=sys.stderr,
        level=os.environ.get("DEPLEN_LOG", "INFO").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(args, parser)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
