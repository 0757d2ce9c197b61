"""bench: solve a suite with several methods and write the results CSV"""

import argparse
import logging
from pathlib import Path

from trackfind.commands import add_schedule_flags, schedule_from_args
from trackfind.errors import UsageError
from trackfind.utils.benchmarking import run_bench, write_bench_csv
from trackfind.utils.monitoring import BenchStore

logger = logging.getLogger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("bench", parents=parents, help="benchmark methods over instance files")
    parser.add_argument("instances", nargs="+", help="instance files or directories of *.tf files")
    parser.add_argument("--methods", default="sa,exact,greedy", help="comma separated subset of sa,exact,greedy")
    add_schedule_flags(parser)
    parser.set_defaults(handler=handle)


def _expand(paths: list[str]) -> list[Path]:
    files = []
    for entry in map(Path, paths):
        if entry.is_dir():
            files.extend(sorted(entry.glob("*.tf")))
        else:
            files.append(entry)
    return files


def handle(args: argparse.Namespace) -> int:
    if args.out is None:
        raise UsageError("bench requires --out")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    paths = _expand(args.instances)
    if not paths:
        raise UsageError("no instance files found")

    store = BenchStore()
    rows = run_bench(
        paths,
        methods,
        alpha=args.alpha,
        gamma=args.gamma,
        time_limit=args.time_limit,
        seed=args.seed,
        schedule=schedule_from_args(args),
        exact_cap=args.exact_cap,
        store=store,
    )
    write_bench_csv(rows, args.out)

    for method, stats in store.get_stats().items():
        agap = f"{stats['agap']:.2f}" if stats["agap"] is not None else "n/a"
        logger.info(
            f"{method}: runs={stats['runs']} ATT={stats['att']:.3f}s AGAP={agap} "
            f"timeouts={stats['timeouts']} infeasible={stats['infeasible']} skipped={stats['skipped']}"
        )
    return 0
