"""Command-line entry point: ``submod-bandit {run,synth,chart,filter-topics}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, EmptyResultError, ParseError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


def _cmd_run(args) -> int:
    from .harness.config import load_config
    from .harness.sweep import run_experiment

    cfg = load_config(args.config, args.override)
    records, out = run_experiment(cfg, args.output_dir)
    bad = [r for r in records if r.status != "ok"]
    print(f"wrote {len(records)} rows to {out / 'results.csv'}")
    if bad:
        print(f"{len(bad)} cells did not finish cleanly", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_synth(args) -> int:
    from .harness.data import (synthesize_dataset, synthesize_ratings, write_ratings_csv,
                               write_relevance_csv, write_weights_csv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model, W = synthesize_dataset(args.n, args.d, args.users, args.seed)
    write_relevance_csv(model, out / "relevance.csv")
    write_ratings_csv(synthesize_ratings(model, W, args.seed, args.ratings_per_user), out / "ratings.csv")
    write_weights_csv(W, out / "weights.csv")
    print(f"wrote relevance.csv, ratings.csv, weights.csv to {out}")
    return EXIT_OK


def _cmd_chart(args) -> int:
    from .harness.sweep import emit_chart, read_results_csv

    rows = read_results_csv(args.results)
    out = Path(args.out) if args.out else Path(args.results).parent
    for p in emit_chart(rows, out):
        print(p)
    return EXIT_OK


def _cmd_filter_topics(args) -> int:
    from .harness.data import filter_topics_by_correlation, load_ratings_csv, load_relevance_csv

    model = load_relevance_csv(args.relevance)
    ratings = load_ratings_csv(args.ratings)
    keep = filter_topics_by_correlation(model, ratings, args.pair_cut, args.rating_cut)
    for i in keep:
        print(model.topic_ids[i])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submod-bandit",
                                     description="Noisy linear submodular maximization experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment sweep from a config file")
    p.add_argument("config")
    p.add_argument("--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override one config entry (repeatable)")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("synth", help="write synthetic relevance/ratings/weights CSVs")
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--users", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratings-per-user", type=int, default=20)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("chart", help="render charts from a results CSV")
    p.add_argument("results")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_chart)

    p = sub.add_parser("filter-topics", help="correlation-based topic selection")
    p.add_argument("--relevance", required=True)
    p.add_argument("--ratings", required=True)
    p.add_argument("--pair-cut", type=float, default=0.4)
    p.add_argument("--rating-cut", type=float, default=0.2)
    p.set_defaults(func=_cmd_filter_topics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParseError, EmptyResultError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
