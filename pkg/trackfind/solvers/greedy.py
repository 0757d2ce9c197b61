"""Greedy track extension baseline"""

import logging
import time

from trackfind.models import Instance, SolveReport
from trackfind.solvers.decoding import decode_tracks
from trackfind.utils.formulations import ConstrainedModel, build_qcbm, check_feasible

logger = logging.getLogger(__name__)


def greedy_baseline(
    instance: Instance,
    alpha: float = 100.0,
    *,
    model: ConstrainedModel | None = None,
) -> SolveReport:
    """
    Extend one track per first-layer hit, layer by layer.

    Each step takes the unused successor with the lowest pair cost against the
    track's last segment; the first step, which has no previous segment, scores
    a candidate by the cheapest pair cost it could open. Successors on the next
    layer are preferred over skips. Ties go to the lowest segment ordinal.
    """
    start = time.perf_counter()
    model = model or build_qcbm(instance, alpha)
    costs = {(a, b): coef for a, b, coef in model.quadratic}
    opening: dict[int, float] = {}
    for (a, _), coef in costs.items():
        opening[a] = min(opening.get(a, 0.0), coef)

    segments = instance.segments
    layer_of = [h.layer for h in instance.hits]
    used = [False] * len(instance.hits)
    tracks = [[h] for h in instance.hits_by_layer[0]]
    last_segment: list[int | None] = [None] * len(tracks)
    assignment = [0] * len(segments)
    for h in instance.hits_by_layer[0]:
        used[h] = True

    for layer in range(1, instance.num_layers):
        for t, track in enumerate(tracks):
            tail = track[-1]
            if layer_of[tail] != layer:
                continue
            free = [s for s in instance.out_segments[tail] if not used[segments[s].target]]
            if not free:
                continue
            adjacent = [s for s in free if layer_of[segments[s].target] == layer + 1]
            previous = last_segment[t]

            def score(s: int, previous: int | None = previous) -> tuple[float, int]:
                if previous is None:
                    return opening.get(s, 0.0), s
                return costs.get((previous, s), 0.0), s

            choice = min(adjacent or free, key=score)
            assignment[choice] = 1
            used[segments[choice].target] = True
            track.append(segments[choice].target)
            last_segment[t] = choice

    feasible = check_feasible(instance, assignment).feasible
    objective = model.objective(assignment)
    wall_time = time.perf_counter() - start
    logger.info(f"Greedy finished: objective {objective:.6f}, feasible={feasible}, {wall_time:.3f}s")
    return SolveReport(
        method="greedy",
        assignment=assignment,
        objective=objective,
        energy=objective,
        feasible=feasible,
        tracks=decode_tracks(instance, assignment) if feasible else None,
        wall_time=wall_time,
    )
