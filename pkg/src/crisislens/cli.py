"""Command-line entry point: per-analysis subcommands over a config file."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import stages
from .config import load_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crisislens",
        description="Batch analytics over archived crisis-event tweet corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_stage(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="pipeline config file (INI)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--jobs", type=int, default=1, help="worker parallelism cap")
        return p

    add_stage("ingest", "load and filter the archived corpus")
    train = add_stage("train", "train a model")
    train.add_argument(
        "target",
        choices=["taxonomy", "relevancy", "damage"],
        help="which model to train",
    )
    add_stage("classify", "assign humanitarian categories")
    add_stage("sentiment", "score sentiment per tweet")
    add_stage("topics", "fit per-day topic models")
    add_stage("entities", "extract and aggregate named entities")
    add_stage("images", "run the image pipeline")
    add_stage("report", "assemble the event report")
    add_stage("all", "run every stage in order")

    fixture = sub.add_parser("make-fixture", help="generate a synthetic end-to-end fixture")
    fixture.add_argument("--out", required=True, help="directory to create")
    fixture.add_argument("--tweets", type=int, default=10000)
    fixture.add_argument("--images", type=int, default=500)
    fixture.add_argument("--days", type=int, default=14)
    fixture.add_argument("--seed", type=int, default=20170825)
    return parser


def run(argv: Sequence[str]) -> int:
    """Execute one subcommand; returns the process exit code.

    Exit 0 on success, 1 with a one-line diagnostic on config/runtime
    errors, 2 on usage errors (argparse prints the usage text).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "make-fixture":
            from .fixtures import make_fixture

            conf_path = make_fixture(
                args.out, n_tweets=args.tweets, n_images=args.images,
                n_days=args.days, seed=args.seed,
            )
            print(conf_path)
            return 0

        cfg = load_config(args.config, seed_override=args.seed, out_override=args.out)
        if args.command == "ingest":
            stages.stage_ingest(cfg)
        elif args.command == "train":
            if args.target == "taxonomy":
                stages.stage_train_taxonomy(cfg)
            elif args.target == "relevancy":
                stages.stage_train_relevancy(cfg, args.jobs)
            else:
                stages.stage_train_damage(cfg, args.jobs)
        elif args.command == "classify":
            stages.stage_classify(cfg)
        elif args.command == "sentiment":
            stages.stage_sentiment(cfg)
        elif args.command == "topics":
            stages.stage_topics(cfg)
        elif args.command == "entities":
            stages.stage_entities(cfg)
        elif args.command == "images":
            stages.stage_images(cfg, args.jobs)
        elif args.command == "report":
            stages.stage_report(cfg)
        elif args.command == "all":
            stages.stage_all(cfg, args.jobs)
        else:  # pragma: no cover - argparse restricts choices
            parser.error(f"unknown command {args.command!r}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    # Console-script entry: setuptools wraps this in sys.exit(...)
    return run(sys.argv[1:] if argv is None else argv)
