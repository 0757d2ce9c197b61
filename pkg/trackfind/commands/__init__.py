"""CLI subcommands for trackfind"""

import argparse

from pydantic import ValidationError

from trackfind.config import settings
from trackfind.errors import UsageError
from trackfind.models import AnnealSchedule, FilterConfig


def add_schedule_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("annealing")
    group.add_argument("--sweeps", type=int, default=settings.sa_sweeps, help="temperature steps per restart")
    group.add_argument("--restarts", type=int, default=settings.sa_restarts, help="independent annealing reads")
    group.add_argument(
        "--initial-temperature",
        type=float,
        default=settings.sa_initial_temperature,
        help="starting temperature (default: largest linear coefficient)",
    )
    group.add_argument(
        "--exact-cap",
        type=int,
        default=settings.exact_max_hits_per_layer,
        help="largest hits per layer per component exact search accepts",
    )


def schedule_from_args(args: argparse.Namespace) -> AnnealSchedule:
    try:
        return AnnealSchedule(
            initial_temperature=args.initial_temperature if args.initial_temperature is not None else "auto",
            final_ratio=settings.sa_final_ratio,
            sweeps=args.sweeps,
            restarts=args.restarts,
            seed=args.seed,
        )
    except ValidationError as e:
        raise UsageError(f"invalid annealing parameters: {e.errors()[0]['msg']}")


def add_filter_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("candidate filtering")
    group.add_argument("--max-skip", type=int, default=settings.max_layer_skip, help="missing layers per segment")
    group.add_argument(
        "--max-angle", type=float, default=settings.max_turning_angle, help="triplet turning angle cutoff (rad)"
    )
    group.add_argument(
        "--cone", type=float, default=settings.max_segment_angle, help="segment acceptance cone around z (rad)"
    )
    group.add_argument("--no-cone", action="store_true", help="disable the acceptance cone")


def filters_from_args(args: argparse.Namespace) -> FilterConfig:
    try:
        return FilterConfig(
            max_layer_skip=args.max_skip,
            max_turning_angle=args.max_angle,
            require_forward=settings.require_forward,
            max_segment_angle=None if args.no_cone else args.cone,
        )
    except ValidationError as e:
        raise UsageError(f"invalid filter parameters: {e.errors()[0]['msg']}")
