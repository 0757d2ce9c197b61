"""plot: render a results CSV as SVG"""

import argparse

from trackfind.errors import UsageError
from trackfind.utils.plotting import plot


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("plot", parents=parents, help="plot GAP or total time against hit count")
    parser.add_argument("csv", help="results CSV written by bench")
    parser.add_argument("--axis", choices=["gap", "time"], default="gap")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.out is None:
        raise UsageError("plot requires --out")
    plot(args.csv, args.axis, args.out)
    return 0
