"""Tests for decoding, repair and the greedy baseline"""

import numpy as np
import pytest

from trackfind.errors import DecodeError
from trackfind.models import GeneratorConfig
from trackfind.solvers.decoding import decode_tracks, encode_tracks, repair, trace_paths, truth_assignment
from trackfind.solvers.exact import exact_search
from trackfind.solvers.greedy import greedy_baseline
from trackfind.utils.formulations import check_feasible
from trackfind.utils.generator import generate_event


def test_trace_paths_orders_by_first_hit():
    assert trace_paths([(5, 7), (1, 3), (3, 9)]) == [[1, 3, 9], [5, 7]]


def test_decode_encode_round_trip(small_event):
    x = truth_assignment(small_event)
    tracks = decode_tracks(small_event, x)
    assert tracks == sorted(small_event.truth)
    assert encode_tracks(small_event, tracks) == x


def test_decode_rejects_infeasible(two_tracks):
    with pytest.raises(DecodeError):
        decode_tracks(two_tracks, [1] * len(two_tracks.segments))


def test_encode_rejects_unknown_pair(two_tracks):
    with pytest.raises(DecodeError, match="not a candidate"):
        encode_tracks(two_tracks, [[0, 5]])


def test_repair_keeps_feasible_input(two_tracks):
    x = truth_assignment(two_tracks)
    assert repair(two_tracks, x) == x


@pytest.mark.parametrize("seed", range(10))
def test_repair_random_assignments(small_event, seed):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, size=len(small_event.segments)).tolist()
    fixed = repair(small_event, x)
    assert check_feasible(small_event, fixed).feasible


def test_repair_empty_assignment(converging_tracks):
    fixed = repair(converging_tracks, [0] * len(converging_tracks.segments))
    assert check_feasible(converging_tracks, fixed).feasible


def test_repair_drops_skip_that_strands_a_hit(converging_tracks):
    skip = converging_tracks.segment_index[(0, 4)]
    x = [0] * len(converging_tracks.segments)
    x[skip] = 1
    fixed = repair(converging_tracks, x)
    assert check_feasible(converging_tracks, fixed).feasible
    assert fixed[skip] == 0


def test_greedy_is_feasible_on_straight_tracks(two_tracks):
    report = greedy_baseline(two_tracks)
    assert report.method == "greedy"
    assert report.feasible
    assert report.tracks == [[0, 2, 4], [1, 3, 5]]


@pytest.mark.parametrize("seed", range(5))
def test_greedy_never_beats_exact(seed):
    instance = generate_event(GeneratorConfig(num_tracks=4, num_layers=5, seed=seed, track_pitch=20.0))
    greedy = greedy_baseline(instance)
    optimum = exact_search(instance)
    if greedy.feasible:
        assert greedy.objective >= optimum.objective - 1e-9
