"""
Synthetic event generation and candidate filtering.

Layers are planes orthogonal to the z axis, layer l at z = (l - 1) x spacing.
Each track leaves one hit per layer; its direction turns by at most the
configured curvature between layers, the geometric stand-in for a minimum
momentum cut.
"""

import logging
import math

import numpy as np
from scipy.spatial import cKDTree

from trackfind.errors import GeneratorError
from trackfind.models import FilterConfig, GeneratorConfig, Hit, Instance, Preset, Segment, Triplet
from trackfind.utils.geometry import combine_cost, cos_beta, segment_length

logger = logging.getLogger(__name__)

PRESET_TRACKS: dict[str, list[int]] = {
    "small": list(range(10, 101, 10)),
    "medium": list(range(125, 351, 25)),
    "large": list(range(375, 601, 25)),
}

# Tries at drawing a turn that keeps the polar angle in range
_TURN_ATTEMPTS = 20


def preset_track_count(preset: Preset, rng: np.random.Generator) -> int:
    """Track count drawn uniformly from a scale preset"""
    return int(rng.choice(PRESET_TRACKS[preset]))


def _random_unit_orthogonal(direction: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    helper = np.array([1.0, 0.0, 0.0]) if abs(direction[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    first = np.cross(direction, helper)
    first /= np.linalg.norm(first)
    second = np.cross(direction, first)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return math.cos(phi) * first + math.sin(phi) * second


def _turn(direction: np.ndarray, config: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    """Rotate direction by an angle in [0, curvature], keeping the polar angle bounded"""
    if config.curvature == 0.0:
        return direction
    for _ in range(_TURN_ATTEMPTS):
        angle = rng.uniform(0.0, config.curvature)
        axis = _random_unit_orthogonal(direction, rng)
        turned = math.cos(angle) * direction + math.sin(angle) * axis
        turned /= np.linalg.norm(turned)
        if math.acos(min(1.0, turned[2])) <= config.max_polar_angle:
            return turned
    return direction


def _trajectories(config: GeneratorConfig, num_tracks: int, rng: np.random.Generator) -> np.ndarray:
    """Hit positions with shape (tracks, layers, 3)"""
    width = config.track_pitch * math.sqrt(num_tracks)
    positions = np.zeros((num_tracks, config.num_layers, 3))
    for t in range(num_tracks):
        point = np.array([rng.uniform(0.0, width), rng.uniform(0.0, width), 0.0])
        theta = rng.uniform(0.0, min(config.max_initial_angle, config.max_polar_angle))
        phi = rng.uniform(0.0, 2.0 * math.pi)
        direction = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        positions[t, 0] = point
        for layer in range(1, config.num_layers):
            if layer > 1:
                direction = _turn(direction, config, rng)
            point = point + direction * (config.layer_spacing / direction[2])
            positions[t, layer] = point
    if config.jitter > 0.0:
        positions[:, :, :2] += rng.normal(0.0, config.jitter, size=(num_tracks, config.num_layers, 2))
    return positions


def _well_separated(positions: np.ndarray, min_separation: float) -> bool:
    if min_separation <= 0.0 or positions.shape[0] < 2:
        return True
    for layer in range(positions.shape[1]):
        tree = cKDTree(positions[:, layer, :2])
        if tree.query_pairs(min_separation):
            return False
    return True


def build_segments(hits: list[Hit], filters: FilterConfig | None = None) -> list[Segment]:
    """
    Candidate segments between hits at most max_layer_skip + 1 layers apart.

    With require_forward the segment must advance along z; with
    max_segment_angle its direction must lie inside that cone around z.
    """
    filters = filters or FilterConfig()
    if not hits:
        return []
    num_layers = max(h.layer for h in hits)
    by_layer: dict[int, list[Hit]] = {}
    for hit in hits:
        by_layer.setdefault(hit.layer, []).append(hit)

    trees: dict[int, tuple[cKDTree, np.ndarray]] = {}
    for layer, members in by_layer.items():
        coords = np.array([h.position for h in members], dtype=np.float64)
        trees[layer] = (cKDTree(coords[:, :2]), coords)

    cone = math.tan(filters.max_segment_angle) if filters.max_segment_angle is not None else None
    pairs: list[tuple[int, int]] = []
    for layer, members in by_layer.items():
        for gap in range(1, filters.max_layer_skip + 2):
            target_layer = layer + gap
            if target_layer > num_layers or target_layer not in by_layer:
                continue
            tree, coords = trees[target_layer]
            targets = by_layer[target_layer]
            for hit in members:
                origin = np.asarray(hit.position, dtype=np.float64)
                if cone is None:
                    candidates = range(len(targets))
                else:
                    reach = cone * float(np.max(np.abs(coords[:, 2] - origin[2])))
                    candidates = tree.query_ball_point(origin[:2], reach + 1e-9)
                for c in candidates:
                    delta = coords[c] - origin
                    if filters.require_forward and delta[2] <= 0.0:
                        continue
                    if cone is not None and math.hypot(delta[0], delta[1]) > cone * abs(delta[2]):
                        continue
                    if not np.any(delta):
                        continue
                    pairs.append((hit.id, targets[c].id))

    return [Segment(source=a, target=b, length=segment_length(hits[a], hits[b])) for a, b in sorted(pairs)]


def build_triplets(hits: list[Hit], segments: list[Segment], filters: FilterConfig | None = None) -> list[Triplet]:
    """Segment pairs sharing a middle hit whose turning angle is within the cutoff"""
    filters = filters or FilterConfig()
    threshold = math.cos(filters.max_turning_angle)
    incoming: dict[int, list[Segment]] = {}
    for segment in segments:
        incoming.setdefault(segment.target, []).append(segment)

    triplets = []
    for second in segments:
        for first in incoming.get(second.source, []):
            i, j, k = hits[first.source], hits[second.source], hits[second.target]
            value = cos_beta(i, j, k)
            if value < threshold:
                continue
            triplets.append(
                Triplet(i=i.id, j=j.id, k=k.id, cos_beta=value, cost=combine_cost(value, first.length, second.length))
            )
    triplets.sort(key=lambda t: (t.i, t.j, t.k))
    return triplets


def generate_event(config: GeneratorConfig, filters: FilterConfig | None = None) -> Instance:
    """Equal-hits-per-layer event with ground truth, deterministic per seed"""
    rng = np.random.default_rng(config.seed)
    num_tracks = config.num_tracks if config.num_tracks is not None else preset_track_count(config.preset, rng)

    for attempt in range(config.max_retries):
        positions = _trajectories(config, num_tracks, rng)
        if _well_separated(positions, config.min_separation):
            break
        logger.debug(f"Collision on attempt {attempt + 1}, resampling")
    else:
        raise GeneratorError(
            f"could not place {num_tracks} tracks {config.min_separation} um apart in {config.max_retries} attempts"
        )

    # Hit ids follow (layer, x, y) so they carry no track information
    records = []
    for t in range(num_tracks):
        for layer in range(config.num_layers):
            x, y, _ = positions[t, layer]
            records.append((layer + 1, float(x), float(y), t))
    records.sort()

    hits = []
    truth: list[list[int]] = [[] for _ in range(num_tracks)]
    for hit_id, (layer, x, y, t) in enumerate(records):
        z = (layer - 1) * config.layer_spacing
        hits.append(Hit(id=hit_id, layer=layer, position=(x, y, float(z))))
        truth[t].append(hit_id)
    truth.sort()

    segments = build_segments(hits, filters)
    triplets = build_triplets(hits, segments, filters)
    logger.info(
        f"Generated event seed={config.seed}: {num_tracks} tracks, {len(hits)} hits, "
        f"{len(segments)} segments, {len(triplets)} triplets"
    )
    return Instance(num_layers=config.num_layers, hits=hits, segments=segments, triplets=triplets, truth=truth)


def generate_suite(
    preset: Preset,
    count: int,
    seed: int = 0,
    filters: FilterConfig | None = None,
    **overrides,
) -> list[Instance]:
    """count events of one preset, seeded seed..seed+count-1"""
    return [
        generate_event(GeneratorConfig(preset=preset, seed=seed + offset, **overrides), filters)
        for offset in range(count)
    ]
