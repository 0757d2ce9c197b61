"""Shared fixtures: small hand-built and generated instances"""

import pytest

from trackfind.models import FilterConfig, GeneratorConfig, Hit, Instance
from trackfind.utils.generator import build_segments, build_triplets, generate_event


def build_instance(
    layers: list[list[tuple[float, float]]],
    spacing: float = 100.0,
    filters: FilterConfig | None = None,
    truth: list[list[int]] | None = None,
) -> Instance:
    """Instance from per-layer (x, y) positions; ids follow layer then list order"""
    hits = []
    for layer, points in enumerate(layers, start=1):
        for x, y in points:
            hits.append(Hit(id=len(hits), layer=layer, position=(float(x), float(y), (layer - 1) * spacing)))
    segments = build_segments(hits, filters)
    triplets = build_triplets(hits, segments, filters)
    return Instance(num_layers=len(layers), hits=hits, segments=segments, triplets=triplets, truth=truth)


@pytest.fixture
def two_tracks() -> Instance:
    """Two parallel straight tracks 10 um apart on three layers"""
    return build_instance(
        [[(0, 0), (10, 0)]] * 3,
        filters=FilterConfig(max_layer_skip=0),
        truth=[[0, 2, 4], [1, 3, 5]],
    )


@pytest.fixture
def converging_tracks() -> Instance:
    """Two converging tracks on four layers, layer skips allowed"""
    return build_instance(
        [
            [(0, 0), (30, 0)],
            [(5, 0), (25, 0)],
            [(10, 0), (20, 0)],
            [(15, 0), (15, 8)],
        ],
        truth=[[0, 2, 4, 6], [1, 3, 5, 7]],
    )


@pytest.fixture
def small_event() -> Instance:
    return generate_event(GeneratorConfig(num_tracks=4, num_layers=4, seed=3))


def tiny_event(seed: int) -> Instance:
    """Generated event with at most eight segment variables"""
    return generate_event(
        GeneratorConfig(num_tracks=2, num_layers=3, seed=seed, track_pitch=20.0),
        FilterConfig(max_layer_skip=0),
    )
