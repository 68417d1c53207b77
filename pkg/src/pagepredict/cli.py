"""Command-line front end.

Exit codes: 0 success, 1 runtime error (I/O, parse, empty data, bad model),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from pagepredict._num import as_fraction
from pagepredict.evaluation import evaluate, split_sessions
from pagepredict.ingest import ParseError, filter_records, format_csv_record, normalize_records, read_log
from pagepredict.model import ModelError, load_model, predict_topk, save_model
from pagepredict.pipeline import NoDataError, TrainConfig, load_sessions, model_summary, train_model
from pagepredict.synthetic import SyntheticSpec, generate_synthetic_log, synthetic_catalog, write_sessions_csv

log = logging.getLogger("pagepredict")


def _unit(text: str) -> float:
    try:
        value = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"{text} outside [0, 1]")
    return float(text)


def _split_fraction(text: str) -> float:
    value = _unit(text)
    if value == 0:
        raise argparse.ArgumentTypeError("train split must be > 0")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"{text} must be > 0")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("inputs", nargs="+", type=Path, help="log files")
    p.add_argument("--format", choices=("clf", "csv"), default="clf")
    p.add_argument("--header", action="store_true", help="CSV input has a header row")


def _add_train_args(p: argparse.ArgumentParser) -> None:
    _add_input_args(p)
    g = p.add_argument_group("pipeline")
    g.add_argument("--session-timeout", type=_positive_float, default=30.0, metavar="MINUTES")
    g.add_argument("--max-session-len", type=_positive_int, default=100)
    g.add_argument("--cluster-threshold", type=_unit, default=0.3)
    g.add_argument("--no-cluster", action="store_true", help="analyse all sessions as one cluster")
    g.add_argument("--context", action="append", default=[], metavar="URL",
                   help="page the working cluster should cover (repeatable)")
    g.add_argument("--alpha1", type=_unit, default=0.2, help="level-1 pruning threshold")
    g.add_argument("--alpha2", type=_unit, default=0.2, help="level-2 pruning threshold")
    g.add_argument("--min-support", type=_unit, default=0.0)
    g.add_argument("--min-confidence", type=_unit, default=0.0)
    g.add_argument("--fallback-popular", action="store_true",
                   help="predict the most popular surviving page instead of abstaining")


def _config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        session_timeout=args.session_timeout,
        max_session_len=args.max_session_len,
        cluster_threshold=args.cluster_threshold,
        no_cluster=args.no_cluster,
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        min_support=args.min_support,
        min_confidence=args.min_confidence,
        fallback_popular=args.fallback_popular,
        context=tuple(args.context),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pagepredict", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="dump normalized, filtered records as CSV")
    _add_input_args(p)
    p.add_argument("--output", type=Path)

    p = sub.add_parser("train", help="train a model and write it to a file")
    _add_train_args(p)
    p.add_argument("--model", type=Path, required=True)

    p = sub.add_parser("evaluate", help="train on a split and score the held-out sessions")
    _add_train_args(p)
    p.add_argument("--train-split", type=_split_fraction, default=0.8)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--cache-size", type=_positive_int, default=1)
    p.add_argument("--self-test", action="store_true", help="score on the training sessions")
    p.add_argument("--test-input", nargs="+", type=Path, help="score on these logs instead of a split")
    p.add_argument("--model", type=Path, help="also save the trained model")
    p.add_argument("--report", type=Path, help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the report as JSON")

    p = sub.add_parser("predict", help="predict the page to prefetch after URL")
    p.add_argument("url")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--topk", type=_positive_int, default=1)
    p.add_argument("--fallback-popular", action="store_true", default=None)

    p = sub.add_parser("gen", help="write a synthetic CSV log from a planted Markov chain")
    p.add_argument("--n-pages", type=_positive_int, default=20)
    p.add_argument("--dominant-prob", type=_unit, default=0.6)
    p.add_argument("--n-sessions", type=_positive_int, default=1000)
    p.add_argument("--mean-length", type=_positive_float, default=8.0)
    p.add_argument("--zipf", type=float, default=0.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("inspect", help="print model statistics")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--json", action="store_true")
    return parser


def _cmd_ingest(args) -> int:
    records = []
    for path in args.inputs:
        records.extend(read_log(path, args.format, args.header))
    records = filter_records(normalize_records(records))
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        for r in records:
            w.writerow(format_csv_record(r))
    finally:
        if args.output:
            out.close()
    return 0


def _print_summary(summary: dict) -> None:
    print(f"sessions      {summary['sessions']}")
    print(f"transitions   {summary['transitions']}")
    print(f"pages         {summary['pages_before']} -> {summary['pages_after']} (level-1 pruning)")
    print(f"pairs         {summary['pairs_before']} -> {summary['pairs_after']} (level-2 pruning)")
    print(f"rules         {summary['rules']}")


def _cmd_train(args) -> int:
    config = _config(args)
    catalog, sessions = load_sessions(args.inputs, args.format, args.header, config)
    model = train_model(sessions, catalog, config)
    save_model(model, args.model)
    _print_summary(model_summary(model))
    return 0


def _cmd_evaluate(args) -> int:
    config = _config(args)
    catalog, sessions = load_sessions(args.inputs, args.format, args.header, config)
    if not sessions:
        raise NoDataError("no data: no sessions left after filtration")
    if args.test_input:
        train = sessions
        _, test = load_sessions(args.test_input, args.format, args.header, config, catalog=catalog)
    elif args.self_test:
        train = test = sessions
    else:
        train, test = split_sessions(sessions, args.train_split, args.seed)
    model = train_model(train, catalog, config)
    if args.model:
        save_model(model, args.model)
    report = evaluate(model, test, args.cache_size)
    doc = report.to_dict()
    if args.report:
        args.report.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print(json.dumps(doc, indent=1, sort_keys=True))
    else:
        print(report.format_text())
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    current = model.page_id(args.url)
    predicted = predict_topk(model, current, args.topk, args.fallback_popular)
    if not predicted:
        print("ABSTAIN")
    for page in predicted:
        print(model.catalog.url_of(page))
    return 0


def _cmd_gen(args) -> int:
    try:
        spec = SyntheticSpec(
            n_pages=args.n_pages,
            dominant_prob=args.dominant_prob,
            n_sessions=args.n_sessions,
            session_len_mean=args.mean_length,
            zipf_exponent=args.zipf,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    sessions = generate_synthetic_log(spec)
    write_sessions_csv(sessions, synthetic_catalog(spec.n_pages), args.output)
    return 0


def _cmd_inspect(args) -> int:
    model = load_model(args.model)
    summary = model_summary(model)
    if args.json:
        print(json.dumps({"summary": summary, "config": model.config}, indent=1, sort_keys=True))
        return 0
    _print_summary(summary)
    for key in sorted(model.config):
        print(f"config.{key} = {model.config[key]!r}")
    return 0


class _UsageError(Exception):
    pass


_COMMANDS = {
    "ingest": _cmd_ingest,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "gen": _cmd_gen,
    "inspect": _cmd_inspect,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (OSError, ParseError, NoDataError, ModelError) as exc:
        print(f"pagepredict: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
