"""solve: run one method on one instance"""

import argparse
import logging
import time
from pathlib import Path

from trackfind.commands import add_schedule_flags, schedule_from_args
from trackfind.solvers import METHODS, run_method
from trackfind.utils.instance_io import read_instance
from trackfind.utils.monitoring import PREPROCESS_DURATION, SOLVE_COUNT, SOLVE_DURATION

logger = logging.getLogger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("solve", parents=parents, help="solve one instance and print the report")
    parser.add_argument("instance", help="instance file")
    parser.add_argument("--method", choices=METHODS, default="sa")
    add_schedule_flags(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    parse_start = time.perf_counter()
    instance = read_instance(args.instance)
    parse_time = time.perf_counter() - parse_start

    deadline = time.monotonic() + args.time_limit if args.time_limit is not None else None
    report = run_method(
        instance,
        args.method,
        alpha=args.alpha,
        gamma=args.gamma,
        schedule=schedule_from_args(args),
        exact_cap=args.exact_cap,
        deadline=deadline,
    )
    report = report.model_copy(update={"preprocessing_time": parse_time + report.preprocessing_time})

    SOLVE_COUNT.labels(method=args.method, status="true" if report.feasible else "false").inc()
    SOLVE_DURATION.labels(method=args.method).observe(report.wall_time)
    PREPROCESS_DURATION.labels(method=args.method).observe(report.preprocessing_time)

    text = report.model_dump_json(indent=2)
    if args.out is not None:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote report to {args.out}")
    else:
        print(text)
    return 0
