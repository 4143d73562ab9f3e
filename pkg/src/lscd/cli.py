"""Command-line pipeline: extract, score, label, consensus, evaluate,
analyze, baseline-freq.

Every option can also come from a JSON config file (--config-file);
explicit flags override file values. Exit status is 0 on success, 2 for
bad input (missing paths, malformed files, out-of-range parameters) and
1 for internal errors. Output files are written atomically, so an
interrupted run never leaves a truncated artifact under its final name.

File naming inside directories follows
``usages_{target}_{period}.jsonl`` and
``embeddings_{target}_{period}.jsonl`` with periods ``t1`` and ``t2``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from . import analysis, corpus, decision, embeddings, evaluation, measures
from .errors import LscdError

log = logging.getLogger("lscd")

PERIODS = ("t1", "t2")

_REQUIRED = object()

FORMAT_NOTES = """\
file formats:
  corpus        UTF-8 text; one token per line as TAB-separated
                surface[<TAB>lemma[<TAB>pos]]; blank line ends a sentence;
                missing lemma defaults to the surface form
  targets       one target lemma per line
  usage dump    JSON Lines, one object per usage: {target, period,
                sentence_index, token_index, target_offset, window_radius,
                tokens: [{surface, lemma, pos?}]}
  embeddings    JSON Lines; header {"target","period","dimension","layer_count"}
                then {"usage_key","layer","vector"} per (usage, layer)
  scores        TSV: target<TAB>score<TAB>measure<TAB>config (6 decimals)
  predictions   TSV: target<TAB>label with labels 0/1, sorted by target
  gold          TSV: target<TAB>label (binary) or target<TAB>score (graded)
  leaderboard   TSV: submission<TAB>threshold<TAB>accuracy (4 decimals)
  analysis      TSV: target<TAB>period<TAB>metric<TAB>value (4 decimals)
"""


def usages_path(out_dir: Path, target: str, period: str) -> Path:
    return out_dir / f"usages_{target}_{period}.jsonl"


def embeddings_path(emb_dir: Path, target: str, period: str) -> Path:
    return emb_dir / f"embeddings_{target}_{period}.jsonl"


def read_targets(path: str | Path) -> list[str]:
    targets: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            target = line.strip()
            if not target:
                continue
            if target in targets:
                raise LscdError(f"{path}: duplicate target {target!r}")
            targets.append(target)
    if not targets:
        raise LscdError(f"{path}: no targets")
    return targets


def _load_config_file(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise LscdError(f"{path}: invalid JSON config ({err})") from None
    if not isinstance(raw, dict):
        raise LscdError(f"{path}: config must be a JSON object")
    return {key.replace("-", "_"): value for key, value in raw.items()}


def _merge_config(args: argparse.Namespace, spec: dict[str, Any]) -> argparse.Namespace:
    """Fill unset options from the config file, then hard defaults.

    `spec` maps option dest names to their defaults (_REQUIRED marks
    options that must come from somewhere). Flags always win.
    """
    config = _load_config_file(getattr(args, "config_file", None))
    unknown = set(config) - set(spec)
    if unknown:
        raise LscdError(f"unknown config keys: {sorted(unknown)}")
    for key, default in spec.items():
        if getattr(args, key, None) is not None:
            continue
        if key in config:
            setattr(args, key, config[key])
        elif default is _REQUIRED:
            raise LscdError(f"missing required option --{key.replace('_', '-')}")
        else:
            setattr(args, key, default)
    return args


def _corpora(args: argparse.Namespace) -> tuple[corpus.Corpus, corpus.Corpus]:
    c1 = corpus.load_corpus(args.corpus_t1, "t1")
    c2 = corpus.load_corpus(args.corpus_t2, "t2")
    return c1, c2


# --- subcommands ---


def cmd_extract(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "corpus_t1": _REQUIRED,
        "corpus_t2": _REQUIRED,
        "targets": _REQUIRED,
        "mode": corpus.ANY_TOKEN_FORM,
        "window_radius": corpus.DEFAULT_WINDOW_RADIUS,
        "max_usages": 200,
        "seed": 0,
        "out_dir": _REQUIRED,
    })
    targets = read_targets(args.targets)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for period_corpus in _corpora(args):
        for target in targets:
            usages = corpus.extract_usages(
                period_corpus,
                target,
                mode=args.mode,
                window_radius=args.window_radius,
                max_usages=args.max_usages,
                seed=args.seed,
            )
            path = usages_path(out_dir, target, period_corpus.period_id)
            corpus.write_usages(usages, path)
            log.info("wrote %d usages to %s", len(usages), path)
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "embeddings_dir": _REQUIRED,
        "targets": _REQUIRED,
        "measure": "apd",
        "layers": ["first+last", "last4"],
        "apd_mode": measures.EXHAUSTIVE,
        "sample_size": None,
        "seed": 0,
        "out": _REQUIRED,
    })
    if args.measure not in measures.MEASURES:
        raise LscdError(f"unknown measure {args.measure!r}; have {sorted(measures.MEASURES)}")
    if isinstance(args.layers, str):
        args.layers = [args.layers]
    mode = None
    if args.measure == "apd":
        if args.apd_mode == measures.SAMPLED:
            if args.sample_size is None:
                raise LscdError("sampled APD needs --sample-size")
            mode = measures.ApdMode.sampled(args.sample_size, args.seed)
        else:
            mode = measures.ApdMode.exhaustive()
    targets = read_targets(args.targets)
    emb_dir = Path(args.embeddings_dir)
    measure_fn = measures.MEASURES[args.measure]

    per_config: dict[str, list[measures.ChangeScore]] = {preset: [] for preset in args.layers}
    for target in targets:
        sets = {}
        for period in PERIODS:
            path = embeddings_path(emb_dir, target, period)
            if not path.exists():
                raise LscdError(f"missing embedding file for {target!r}/{period}: {path}")
            parsed = embeddings.parse_embedding_file(path)
            if parsed.target != target or parsed.period_id != period:
                raise LscdError(
                    f"{path}: header says {parsed.target!r}/{parsed.period_id},"
                    f" expected {target!r}/{period}"
                )
            sets[period] = parsed
        for preset in args.layers:
            combined = [
                embeddings.combine_layers(
                    sets[period], embeddings.resolve_layer_spec(preset, sets[period].layer_count)
                )
                for period in PERIODS
            ]
            score = measure_fn(combined[0], combined[1], mode, preset)
            per_config[preset].append(score)

    tables = [measures.ScoreTable.from_change_scores(scores)
              for scores in per_config.values()]
    measures.write_score_file(tables, args.out)
    log.info("wrote %d score rows to %s", sum(len(t.scores) for t in tables), args.out)
    return 0


def _select_table(tables: list[measures.ScoreTable], measure: str,
                  config: str) -> measures.ScoreTable:
    for table in tables:
        if table.measure_id == measure and table.config_id == config:
            return table
    available = sorted((t.measure_id, t.config_id) for t in tables)
    raise LscdError(f"no scores for measure={measure!r} config={config!r};"
                    f" file has {available}")


def _check_positives_guard(k: int, n_targets: int, override: int | None) -> None:
    limit = override if override is not None else decision.max_positives(n_targets)
    if k > limit:
        raise LscdError(
            f"k={k} exceeds the positives guard of {limit}"
            f" (at most half of {n_targets} targets unless --max-positives raises it)"
        )


def cmd_label(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "scores": _REQUIRED,
        "measure": "apd",
        "config": _REQUIRED,
        "k": _REQUIRED,
        "max_positives": None,
        "out": _REQUIRED,
    })
    tables = measures.read_score_file(args.scores)
    table = _select_table(tables, args.measure, args.config)
    _check_positives_guard(args.k, len(table.scores), args.max_positives)
    prediction = decision.label_top_k(decision.rank_targets(table), args.k)
    decision.write_predictions(prediction, args.out)
    log.info("wrote %d labels (%d positive) to %s",
             len(prediction), sum(prediction.values()), args.out)
    return 0


def cmd_consensus(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "scores": _REQUIRED,
        "measure": "apd",
        "config": _REQUIRED,  # repeatable
        "k": _REQUIRED,
        "max_positives": None,
        "out": _REQUIRED,
    })
    configs = args.config if isinstance(args.config, list) else [args.config]
    if len(configs) < 2:
        raise LscdError("consensus needs at least two --config values")
    tables = measures.read_score_file(args.scores)
    rankings = [
        decision.rank_targets(_select_table(tables, args.measure, config))
        for config in configs
    ]
    _check_positives_guard(args.k, len(rankings[0]), args.max_positives)
    prediction, agreement = decision.consensus_top_k(rankings, args.k)
    decision.write_predictions(prediction, args.out)
    print(f"agreement_size\t{agreement}")
    log.info("wrote consensus labels to %s", args.out)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "pred": _REQUIRED,  # repeatable NAME=PATH
        "gold": _REQUIRED,
        "out": _REQUIRED,
    })
    preds = args.pred if isinstance(args.pred, list) else [args.pred]
    gold = evaluation.read_gold(args.gold)
    submissions: dict[str, decision.Prediction] = {}
    for item in preds:
        name, sep, path = item.partition("=")
        if not sep:
            name, path = Path(item).stem, item
        if name in submissions:
            raise LscdError(f"duplicate submission name {name!r}")
        submissions[name] = decision.read_predictions(path)
    rows = evaluation.build_leaderboard(submissions, gold)
    evaluation.write_leaderboard(rows, args.out)
    for row in rows:
        log.info("%s\t%s\t%s", row.submission, row.threshold,
                 evaluation.format_score(row.accuracy))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "usages": _REQUIRED,  # repeatable
        "pattern": [],
        "out": _REQUIRED,
    })
    usage_files = args.usages if isinstance(args.usages, list) else [args.usages]
    patterns = [p.split() for p in (args.pattern or [])]
    profiles = []
    for path in usage_files:
        usages = corpus.read_usages(path)
        if not usages:
            raise LscdError(f"{path}: no usages to analyze")
        mixed = {(u.target, u.period_id) for u in usages}
        if len(mixed) != 1:
            raise LscdError(f"{path}: mixed targets/periods {sorted(mixed)}")
        target_folded = usages[0].target.casefold()
        applicable = [
            p for p in patterns
            if sum(1 for lemma in p if lemma.casefold() == target_folded) == 1
        ]
        profiles.append(analysis.build_profile(usages, applicable))
    analysis.write_analysis_report(profiles, args.out)
    log.info("wrote analysis report for %d usage files to %s", len(profiles), args.out)
    return 0


def cmd_baseline_freq(args: argparse.Namespace) -> int:
    _merge_config(args, {
        "corpus_t1": _REQUIRED,
        "corpus_t2": _REQUIRED,
        "targets": _REQUIRED,
        "k": _REQUIRED,
        "max_positives": None,
        "out_scores": _REQUIRED,
        "out_pred": _REQUIRED,
    })
    targets = read_targets(args.targets)
    _check_positives_guard(args.k, len(targets), args.max_positives)
    c1, c2 = _corpora(args)
    table, prediction = evaluation.frequency_baseline(c1, c2, targets, args.k)
    measures.write_score_file([table], args.out_scores)
    decision.write_predictions(prediction, args.out_pred)
    log.info("wrote frequency-baseline scores to %s and labels to %s",
             args.out_scores, args.out_pred)
    return 0


# --- argument parsing ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lscd",
        description="Lexical semantic change detection over two time-sliced corpora.",
        epilog=FORMAT_NOTES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(
            name, help=help_text, epilog=FORMAT_NOTES,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--config-file", help="JSON file with option defaults; flags override")
        p.set_defaults(func=func)
        return p

    p = add("extract", "extract capped usage windows per target and period", cmd_extract)
    p.add_argument("--corpus-t1", help="corpus file for period t1")
    p.add_argument("--corpus-t2", help="corpus file for period t2")
    p.add_argument("--targets", help="targets file, one lemma per line")
    p.add_argument("--mode", choices=corpus.MATCH_MODES,
                   help=f"matching mode (default {corpus.ANY_TOKEN_FORM})")
    p.add_argument("--window-radius", type=int,
                   help="sentences of context on each side (default 1)")
    p.add_argument("--max-usages", type=int, help="usage cap per target/period (default 200)")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--out-dir", help="directory for usages_{target}_{period}.jsonl files")

    p = add("score", "combine layers and score change per target", cmd_score)
    p.add_argument("--embeddings-dir",
                   help="directory with embeddings_{target}_{period}.jsonl files")
    p.add_argument("--targets", help="targets file, one lemma per line")
    p.add_argument("--measure", choices=sorted(measures.MEASURES),
                   help="change measure (default apd)")
    p.add_argument("--layers", action="append",
                   help="layer preset: first+last, last4, or comma-separated indices;"
                        " repeatable (default both presets)")
    p.add_argument("--apd-mode", choices=(measures.EXHAUSTIVE, measures.SAMPLED),
                   help="APD pair enumeration (default exhaustive)")
    p.add_argument("--sample-size", type=int, help="vectors drawn per set in sampled mode")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--out", help="output score TSV")

    p = add("label", "binary labels for the top-k of one score ranking", cmd_label)
    p.add_argument("--scores", help="score TSV from the score step")
    p.add_argument("--measure", help="measure id to select (default apd)")
    p.add_argument("--config", help="config id to select (e.g. first+last)")
    p.add_argument("-k", type=int, help="number of targets labeled 1")
    p.add_argument("--max-positives", type=int,
                   help="override the ceil(n/2) guard on k")
    p.add_argument("--out", help="output prediction TSV")

    p = add("consensus", "label only targets in every ranking's top k", cmd_consensus)
    p.add_argument("--scores", help="score TSV from the score step")
    p.add_argument("--measure", help="measure id to select (default apd)")
    p.add_argument("--config", action="append",
                   help="config id to include; give two or more")
    p.add_argument("-k", type=int, help="top-k size per ranking")
    p.add_argument("--max-positives", type=int,
                   help="override the ceil(n/2) guard on k")
    p.add_argument("--out", help="output prediction TSV")

    p = add("evaluate", "accuracy leaderboard against binary gold", cmd_evaluate)
    p.add_argument("--pred", action="append",
                   help="submission as NAME=PATH (or PATH; stem becomes the name);"
                        " repeatable")
    p.add_argument("--gold", help="binary gold TSV")
    p.add_argument("--out", help="output leaderboard TSV")

    p = add("analyze", "capitalization and collocation probes over usage dumps", cmd_analyze)
    p.add_argument("--usages", action="append",
                   help="usage dump JSONL (one target/period per file); repeatable")
    p.add_argument("--pattern", action="append",
                   help="space-separated lemma pattern containing a target; repeatable")
    p.add_argument("--out", help="output analysis TSV")

    p = add("baseline-freq",
            "frequency-difference baseline scores and labels"
            " (the only corpus-statistics baseline implemented; there is no"
            " collocations baseline)",
            cmd_baseline_freq)
    p.add_argument("--corpus-t1", help="corpus file for period t1")
    p.add_argument("--corpus-t2", help="corpus file for period t2")
    p.add_argument("--targets", help="targets file, one lemma per line")
    p.add_argument("-k", type=int, help="number of targets labeled 1")
    p.add_argument("--max-positives", type=int,
                   help="override the ceil(n/2) guard on k")
    p.add_argument("--out-scores", help="output score TSV")
    p.add_argument("--out-pred", help="output prediction TSV")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LscdError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # pragma: no cover - defensive
        print(f"internal error: {err!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
