"""trackfind - track finding as quadratic binary optimization"""

import argparse
import logging
import sys

from trackfind import __version__
from trackfind.commands import bench, gen, plot, solve
from trackfind.config import settings
from trackfind.errors import TrackFindError, UsageError
from trackfind.utils.monitoring import export_prometheus_metrics

logging.basicConfig(
    level=getattr(logging, settings.log_level.upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as UsageError instead of exiting"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.seed, help="master seed")
    common.add_argument("--alpha", type=float, default=settings.alpha, help="objective weight")
    common.add_argument("--gamma", type=float, default=settings.gamma, help="constraint penalty weight")
    common.add_argument(
        "--time-limit", type=float, default=settings.time_limit, help="seconds allowed per solve"
    )
    common.add_argument("--out", help="output path")
    common.add_argument("--log-level", default=settings.log_level, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--metrics-out", help="write Prometheus metrics to this file when done")
    return common


def build_parser() -> CommandParser:
    parser = CommandParser(prog="trackfind", description="Track finding as quadratic binary optimization")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [_common_flags()]
    gen.register(subparsers, parents)
    solve.register(subparsers, parents)
    bench.register(subparsers, parents)
    plot.register(subparsers, parents)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand; 0 on success, 1 on usage errors, 2 on runtime errors"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        logger.error(e.detail)
        return e.exit_code
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0

    level = getattr(logging, args.log_level.upper(), None)
    if not isinstance(level, int):
        logger.error(f"unknown log level '{args.log_level}'")
        return UsageError.exit_code
    logging.getLogger().setLevel(level)

    try:
        code = args.handler(args)
    except TrackFindError as e:
        logger.error(f"{args.command} failed: {e.detail}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        return 2

    if args.metrics_out and settings.metrics_enabled:
        export_prometheus_metrics(args.metrics_out)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
