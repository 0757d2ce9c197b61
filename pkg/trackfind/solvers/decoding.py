"""Track decoding, encoding and feasibility repair"""

import logging

import numpy as np
from scipy.optimize import linear_sum_assignment

from trackfind.errors import DecodeError, RepairError
from trackfind.models import Instance
from trackfind.utils.formulations import check_feasible

logger = logging.getLogger(__name__)

# Cost assigned to non-candidate pairs in the completion matching
_FORBIDDEN = 1e12


def trace_paths(edges: list[tuple[int, int]]) -> list[list[int]]:
    """Follow selected (source, target) edges from every path start, ordered by first hit"""
    successor = dict(edges)
    targets = {target for _, target in edges}
    starts = sorted(source for source in successor if source not in targets)
    tracks = []
    for start in starts:
        track = [start]
        while track[-1] in successor:
            track.append(successor[track[-1]])
        tracks.append(track)
    return tracks


def decode_tracks(instance: Instance, assignment: list[int]) -> list[list[int]]:
    """Vertex-disjoint layer-1 to layer-L paths of a feasible assignment"""
    if not check_feasible(instance, assignment).feasible:
        raise DecodeError()
    edges = [(instance.segments[s].source, instance.segments[s].target) for s, bit in enumerate(assignment) if bit]
    tracks = trace_paths(edges)
    # Single-layer instances have hits but no segments
    covered = {h for track in tracks for h in track}
    tracks.extend([h] for h in instance.hits_by_layer[0] if h not in covered)
    return sorted(tracks)


def encode_tracks(instance: Instance, tracks: list[list[int]]) -> list[int]:
    """Bit-vector selecting the consecutive pairs of every track"""
    assignment = [0] * len(instance.segments)
    index = instance.segment_index
    for track in tracks:
        for a, b in zip(track, track[1:]):
            if (a, b) not in index:
                raise DecodeError(f"track pair ({a}, {b}) is not a candidate segment")
            assignment[index[(a, b)]] = 1
    return assignment


def truth_assignment(instance: Instance) -> list[int]:
    """Encoded ground truth (raises when the truth is not representable)"""
    if instance.truth is None:
        raise DecodeError("instance carries no ground truth")
    return encode_tracks(instance, instance.truth)


def pair_costs(instance: Instance, alpha: float) -> dict[tuple[int, int], float]:
    """(segment a, segment b) -> alpha x triplet cost"""
    index = instance.segment_index
    return {(index[(t.i, t.j)], index[(t.j, t.k)]): alpha * t.cost for t in instance.triplets}


class _RepairState:
    """Assignment under repair with per-hit selected degree counts"""

    def __init__(self, instance: Instance, assignment: list[int], costs: dict[tuple[int, int], float]):
        self.instance = instance
        self.costs = costs
        self.x = list(assignment)
        self.in_count = [0] * len(instance.hits)
        self.out_count = [0] * len(instance.hits)
        for s, bit in enumerate(self.x):
            if bit:
                self._count(s, 1)

    def _count(self, s: int, step: int) -> None:
        segment = self.instance.segments[s]
        self.out_count[segment.source] += step
        self.in_count[segment.target] += step

    def set(self, s: int, value: int) -> None:
        if self.x[s] != value:
            self.x[s] = value
            self._count(s, 1 if value else -1)

    def local_cost(self, s: int) -> float:
        """Pair costs segment s forms with the selected segments around it"""
        segment = self.instance.segments[s]
        total = 0.0
        for a in self.instance.in_segments[segment.source]:
            if self.x[a] and a != s:
                total += self.costs.get((a, s), 0.0)
        for b in self.instance.out_segments[segment.target]:
            if self.x[b] and b != s:
                total += self.costs.get((s, b), 0.0)
        return total

    def estimate(self, s: int) -> float:
        """local_cost, with an open end priced at half its cheapest pair cost"""
        segment = self.instance.segments[s]
        total = 0.0
        inner = [a for a in self.instance.in_segments[segment.source] if a != s]
        if any(self.x[a] for a in inner):
            total += sum(self.costs.get((a, s), 0.0) for a in inner if self.x[a])
        else:
            total += 0.5 * min((self.costs.get((a, s), 0.0) for a in inner), default=0.0)
        outer = [b for b in self.instance.out_segments[segment.target] if b != s]
        if any(self.x[b] for b in outer):
            total += sum(self.costs.get((s, b), 0.0) for b in outer if self.x[b])
        else:
            total += 0.5 * min((self.costs.get((s, b), 0.0) for b in outer), default=0.0)
        return total

    def clear_overdegree(self) -> None:
        for hit in self.instance.hits:
            for group in (self.instance.out_segments[hit.id], self.instance.in_segments[hit.id]):
                selected = [s for s in group if self.x[s]]
                if len(selected) > 1:
                    keep = min(selected, key=lambda s: (self.local_cost(s), s))
                    for s in selected:
                        if s != keep:
                            self.set(s, 0)


def _complete_greedily(state: _RepairState) -> bool:
    instance = state.instance
    order = sorted(instance.send_hits, key=lambda h: (instance.hits[h].layer, h))
    for hit in order:
        if state.out_count[hit]:
            continue
        free = [s for s in instance.out_segments[hit] if not state.in_count[instance.segments[s].target]]
        if not free:
            return False
        next_layer = instance.hits[hit].layer + 1
        adjacent = [s for s in free if instance.hits[instance.segments[s].target].layer == next_layer]
        pool = adjacent or free
        choice = min(pool, key=lambda s: (state.local_cost(s), s))
        state.set(choice, 1)
    return check_feasible(instance, state.x).feasible


def _complete_by_matching(state: _RepairState) -> bool:
    """Min-cost completion of the open out-degrees onto the open in-degrees"""
    instance = state.instance
    rows = [h for h in instance.send_hits if not state.out_count[h]]
    cols = [h for h in instance.receive_hits if not state.in_count[h]]
    if len(rows) != len(cols):
        return False
    if not rows:
        return check_feasible(instance, state.x).feasible

    col_index = {h: c for c, h in enumerate(cols)}
    cost = np.full((len(rows), len(cols)), _FORBIDDEN)
    choice: dict[tuple[int, int], int] = {}
    for r, hit in enumerate(rows):
        for s in instance.out_segments[hit]:
            c = col_index.get(instance.segments[s].target)
            if c is None:
                continue
            value = state.estimate(s)
            if value < cost[r, c]:
                cost[r, c] = value
                choice[(r, c)] = s

    row_ind, col_ind = linear_sum_assignment(cost)
    for r, c in zip(row_ind.tolist(), col_ind.tolist()):
        if (r, c) not in choice:
            return False
        state.set(choice[(r, c)], 1)
    return check_feasible(instance, state.x).feasible


def repair(instance: Instance, assignment: list[int], alpha: float = 100.0) -> list[int]:
    """
    Turn an arbitrary assignment into a feasible one.

    Over-degree hits keep their locally cheapest selected segment, then open
    degrees are completed greedily in layer order. When the greedy pass strands
    a hit, the completion is redone as a min-cost bipartite matching, first on
    the kept segments, then on the kept consecutive-layer segments only (a kept
    skip can strand the hit it jumps over), then from nothing. The last stage
    succeeds whenever the instance has any feasible assignment.
    """
    if check_feasible(instance, assignment).feasible:
        return list(assignment)

    costs = pair_costs(instance, alpha)
    state = _RepairState(instance, assignment, costs)
    state.clear_overdegree()
    cleared = list(state.x)

    if _complete_greedily(state):
        return state.x

    layer_of = [h.layer for h in instance.hits]
    adjacent = [
        bit if layer_of[s.target] - layer_of[s.source] == 1 else 0 for bit, s in zip(cleared, instance.segments)
    ]
    stages = (("kept segments", cleared), ("kept adjacent segments", adjacent), ("empty", [0] * len(cleared)))
    for name, start in stages:
        logger.debug(f"Repair: matching completion from {name}")
        state = _RepairState(instance, start, costs)
        if _complete_by_matching(state):
            return state.x
    raise RepairError()
