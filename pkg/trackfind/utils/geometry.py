"""Segment lengths, turning angles and triplet costs"""

import numpy as np

from trackfind.errors import DegenerateSegmentError, MissingTruthError
from trackfind.models import Hit, Instance


def _direction(a: Hit, b: Hit) -> np.ndarray:
    return np.asarray(b.position, dtype=np.float64) - np.asarray(a.position, dtype=np.float64)


def segment_length(a: Hit, b: Hit) -> float:
    """Euclidean distance between two hits in micrometers"""
    length = float(np.linalg.norm(_direction(a, b)))
    if length == 0.0:
        raise DegenerateSegmentError(f"degenerate segment between hits {a.id} and {b.id}")
    return length


def cos_beta(i: Hit, j: Hit, k: Hit) -> float:
    """
    Cosine of the turning angle at j between segments (i, j) and (j, k).

    Collinear continuation gives 1, a right-angle turn gives 0.
    """
    u = _direction(i, j)
    v = _direction(j, k)
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise DegenerateSegmentError(f"degenerate segment in triple ({i.id}, {j.id}, {k.id})")
    value = float(np.dot(u, v)) / (norm_u * norm_v)
    return min(1.0, max(-1.0, value))


def combine_cost(cos_value: float, d_ij: float, d_jk: float) -> float:
    """Pair cost -cos(beta) / (d_ij + d_jk) from its parts"""
    return -cos_value / (d_ij + d_jk)


def triplet_cost(i: Hit, j: Hit, k: Hit) -> float:
    """Cost of chaining segments (i, j) and (j, k) in one track"""
    return combine_cost(cos_beta(i, j, k), segment_length(i, j), segment_length(j, k))


def track_cost(instance: Instance, track: list[int]) -> float:
    """Sum of pair costs along one ordered hit list, computed from geometry"""
    hits = instance.hits
    return sum(triplet_cost(hits[a], hits[b], hits[c]) for a, b, c in zip(track, track[1:], track[2:]))


def true_cost(instance: Instance) -> float:
    """Total pair cost of the ground-truth tracks"""
    if instance.truth is None:
        raise MissingTruthError()
    return sum(track_cost(instance, track) for track in instance.truth)
