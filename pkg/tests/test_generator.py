"""Tests for event generation and candidate filtering"""

import math

import numpy as np
import pytest

from trackfind.errors import GeneratorError
from trackfind.models import FilterConfig, GeneratorConfig, Hit
from trackfind.solvers.decoding import truth_assignment
from trackfind.utils.formulations import check_feasible
from trackfind.utils.generator import PRESET_TRACKS, build_segments, build_triplets, generate_event, generate_suite
from trackfind.utils.instance_io import format_instance


def _layered(points: list[tuple[int, float, float]]) -> list[Hit]:
    return [Hit(id=i, layer=layer, position=(x, 0.0, 100.0 * (layer - 1))) for i, (layer, x, _) in enumerate(points)]


def test_seventy_hits():
    instance = generate_event(GeneratorConfig(num_tracks=10, num_layers=7, seed=1))
    assert len(instance.hits) == 70
    assert all(len(layer) == 10 for layer in instance.hits_by_layer)
    assert len(instance.truth) == 10


def test_same_seed_same_bytes():
    config = GeneratorConfig(num_tracks=12, seed=5, jitter=0.5)
    assert format_instance(generate_event(config)) == format_instance(generate_event(config))
    other = GeneratorConfig(num_tracks=12, seed=6, jitter=0.5)
    assert format_instance(generate_event(other)) != format_instance(generate_event(config))


def test_straight_tracks_have_unit_cosine():
    instance = generate_event(GeneratorConfig(num_tracks=6, curvature=0.0, seed=2))
    truth_triples = {(a, b, c) for track in instance.truth for a, b, c in zip(track, track[1:], track[2:])}
    admitted = {(t.i, t.j, t.k): t for t in instance.triplets}
    assert truth_triples <= admitted.keys()
    for key in truth_triples:
        assert admitted[key].cos_beta == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_truth_is_admissible(seed):
    instance = generate_event(GeneratorConfig(num_tracks=20, seed=seed, jitter=0.0))
    pairs = {(s.source, s.target) for s in instance.segments}
    triples = {(t.i, t.j, t.k) for t in instance.triplets}
    for track in instance.truth:
        assert set(zip(track, track[1:])) <= pairs
        assert set(zip(track, track[1:], track[2:])) <= triples
    assert check_feasible(instance, truth_assignment(instance)).feasible


def test_turning_bounded_by_curvature():
    curvature = 0.05
    instance = generate_event(GeneratorConfig(num_tracks=15, curvature=curvature, seed=4))
    admitted = {(t.i, t.j, t.k): t.cos_beta for t in instance.triplets}
    for track in instance.truth:
        for triple in zip(track, track[1:], track[2:]):
            assert math.acos(min(1.0, admitted[triple])) <= curvature + 1e-9


def test_segments_count_bound_without_skips():
    hits = _layered([(1, 0, 0), (1, 50, 0), (2, 0, 0), (2, 50, 0), (3, 0, 0), (3, 50, 0)])
    segments = build_segments(hits, FilterConfig(max_layer_skip=0, max_segment_angle=None))
    assert len(segments) == 8


def test_skip_range():
    hits = _layered([(layer, 0.0, 0.0) for layer in range(1, 6)])
    segments = build_segments(hits, FilterConfig(max_layer_skip=2))
    pairs = {(s.source, s.target) for s in segments}
    assert (0, 3) in pairs
    assert (0, 4) not in pairs


def test_cone_rejects_wide_segments():
    hits = _layered([(1, 0.0, 0.0), (2, 80.0, 0.0)])
    assert build_segments(hits, FilterConfig(max_segment_angle=0.5)) == []
    assert len(build_segments(hits, FilterConfig(max_segment_angle=None))) == 1


def test_backward_segments_rejected():
    hits = [Hit(id=0, layer=1, position=(0.0, 0.0, 100.0)), Hit(id=1, layer=2, position=(0.0, 0.0, 0.0))]
    assert build_segments(hits, FilterConfig(max_segment_angle=None)) == []
    assert len(build_segments(hits, FilterConfig(max_segment_angle=None, require_forward=False))) == 1


def test_triplet_angle_cutoff():
    hits = [
        Hit(id=0, layer=1, position=(0.0, 0.0, 0.0)),
        Hit(id=1, layer=2, position=(0.0, 0.0, 100.0)),
        Hit(id=2, layer=3, position=(0.0, 0.0, 200.0)),
        Hit(id=3, layer=3, position=(100.0, 0.0, 100.0)),
    ]
    filters = FilterConfig(max_segment_angle=None, require_forward=False)
    segments = build_segments(hits, filters)
    triplets = build_triplets(hits, segments, filters)
    assert [(t.i, t.j, t.k) for t in triplets] == [(0, 1, 2)]
    assert triplets[0].cos_beta == 1.0
    assert triplets[0].cost == pytest.approx(-1 / 200)


def test_presets():
    counts = {len(generate_event(GeneratorConfig(preset="small", seed=seed)).truth) for seed in range(10)}
    assert counts <= set(PRESET_TRACKS["small"])
    assert PRESET_TRACKS["medium"][0] == 125 and PRESET_TRACKS["medium"][-1] == 350
    assert PRESET_TRACKS["large"][0] == 375 and PRESET_TRACKS["large"][-1] == 600


def test_suite_seeds():
    suite = generate_suite("small", 3, seed=10, num_layers=4)
    assert len(suite) == 3
    assert all(inst.num_layers == 4 for inst in suite)
    assert len({format_instance(inst) for inst in suite}) == 3


def test_collisions_exhaust_retries():
    config = GeneratorConfig(num_tracks=50, track_pitch=0.01, min_separation=5.0, max_retries=3)
    with pytest.raises(GeneratorError):
        generate_event(config)


def test_transverse_spread_follows_pitch():
    instance = generate_event(GeneratorConfig(num_tracks=25, track_pitch=100.0, max_initial_angle=0.0, seed=8))
    first = np.array([instance.hits[h].position[:2] for h in instance.hits_by_layer[0]])
    assert first.min() >= 0.0 and first.max() <= 500.0
