"""gen: write synthetic instance files"""

import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from trackfind.commands import add_filter_flags, filters_from_args
from trackfind.errors import UsageError
from trackfind.models import GeneratorConfig
from trackfind.utils.generator import generate_event
from trackfind.utils.instance_io import write_instance

logger = logging.getLogger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("gen", parents=parents, help="generate instance files")
    parser.add_argument("--tracks", type=int, help="tracks per event (drawn from --preset when omitted)")
    parser.add_argument("--layers", type=int, default=7)
    parser.add_argument("--preset", choices=["small", "medium", "large"])
    parser.add_argument("--spacing", type=float, default=100.0, help="layer spacing in micrometers")
    parser.add_argument("--curvature", type=float, default=0.05, help="largest direction change per layer (rad)")
    parser.add_argument("--jitter", type=float, default=0.0, help="transverse hit smearing in micrometers")
    parser.add_argument("--track-pitch", type=float, default=100.0, help="transverse room per track in micrometers")
    parser.add_argument("--count", type=int, default=1, help="events to write, seeded --seed onwards")
    add_filter_flags(parser)
    parser.set_defaults(handler=handle)


def _file_name(config: GeneratorConfig) -> str:
    stem = config.preset if config.preset is not None else f"t{config.num_tracks}"
    return f"{stem}_{config.seed:04d}.tf"


def handle(args: argparse.Namespace) -> int:
    """
    Write one instance to --out, or --count instances into the --out directory
    """
    if args.out is None:
        raise UsageError("gen requires --out")
    if args.count < 1:
        raise UsageError("--count must be positive")

    filters = filters_from_args(args)
    try:
        configs = [
            GeneratorConfig(
                num_tracks=args.tracks,
                num_layers=args.layers,
                layer_spacing=args.spacing,
                curvature=args.curvature,
                jitter=args.jitter,
                track_pitch=args.track_pitch,
                seed=args.seed + offset,
                preset=args.preset,
            )
            for offset in range(args.count)
        ]
    except ValidationError as e:
        raise UsageError(f"invalid generator parameters: {e.errors()[0]['msg']}")

    out = Path(args.out)
    if args.count == 1:
        targets = [out]
    else:
        out.mkdir(parents=True, exist_ok=True)
        targets = [out / _file_name(config) for config in configs]

    for config, target in zip(configs, targets):
        instance = generate_event(config, filters)
        write_instance(instance, target)
        logger.info(f"Wrote {target} ({len(instance.hits)} hits)")
    return 0
