"""
Exact depth-first search for the constrained model optimum.

Hits are decided in (layer, id) order; deciding a hit picks its outgoing
segment among targets that have not received one yet. When hit j is decided
its incoming segment is already fixed, so the pair cost with middle hit j is
known at that point. A branch is cut when its partial cost plus the sum of the
cheapest pair cost of every remaining middle hit cannot beat the incumbent.

Two feasibility cuts apply regardless of the bound:

- a receiving hit whose last possible sender has been decided must have its
  incoming segment;
- the hits of the next layer still waiting for input can only be served by
  the undecided hits of the current layer, so there must be at least as many
  of those.

The incumbent starts from the greedy baseline (repaired when it is not
feasible). The problem separates over connected components of the segment
graph, which are searched independently.
"""

import logging
import sys
import time

from trackfind.errors import InfeasibleInstanceError, InstanceTooLargeError, RepairError, SolveTimeoutError
from trackfind.models import Instance, SolveReport
from trackfind.solvers.decoding import decode_tracks, repair
from trackfind.solvers.greedy import greedy_baseline
from trackfind.utils.formulations import ConstrainedModel, build_qcbm

logger = logging.getLogger(__name__)

# Nodes between deadline checks
_DEADLINE_STRIDE = 4096


def connected_components(instance: Instance) -> list[list[int]]:
    """Hit sets joined by candidate segments, each sorted, ordered by smallest hit"""
    parent = list(range(len(instance.hits)))

    def find(h: int) -> int:
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    for segment in instance.segments:
        a, b = find(segment.source), find(segment.target)
        if a != b:
            parent[max(a, b)] = min(a, b)

    groups: dict[int, list[int]] = {}
    for hit in instance.hits:
        groups.setdefault(find(hit.id), []).append(hit.id)
    return sorted(groups.values())


def _incumbent(instance: Instance, alpha: float, model: ConstrainedModel) -> list[int] | None:
    """Feasible starting assignment, or None when neither greedy nor repair finds one"""
    greedy = greedy_baseline(instance, alpha, model=model)
    if greedy.feasible:
        return greedy.assignment
    try:
        return repair(instance, greedy.assignment, alpha)
    except RepairError:
        logger.debug("No feasible incumbent, exact search starts unbounded")
        return None


class _ComponentSearch:
    def __init__(
        self,
        instance: Instance,
        hits: list[int],
        costs: dict[tuple[int, int], float],
        prune: bool,
        deadline: float | None,
    ):
        self.instance = instance
        self.costs = costs
        self.prune = prune
        self.deadline = deadline
        self.layer_of = layer_of = [h.layer for h in instance.hits]
        last = instance.num_layers

        self.order = sorted((h for h in hits if layer_of[h] < last), key=lambda h: (layer_of[h], h))
        self.terminals = [h for h in hits if layer_of[h] == last]
        self.needs_input = [layer_of[h] >= 2 for h in self.order]

        position_of = {h: p for p, h in enumerate(self.order)}
        self.layer_end = [0] * len(self.order)
        end = len(self.order)
        for p in range(len(self.order) - 1, -1, -1):
            if p + 1 < len(self.order) and layer_of[self.order[p + 1]] != layer_of[self.order[p]]:
                end = p + 1
            self.layer_end[p] = end

        # Receivers to check once the position of their last sender is decided
        self.closes: list[list[int]] = [[] for _ in self.order]
        for h in hits:
            if layer_of[h] < 2:
                continue
            senders = [position_of[instance.segments[s].source] for s in instance.in_segments[h]]
            if senders:
                self.closes[max(senders)].append(h)

        cheapest: dict[int, float] = {}
        for (a, _), cost in costs.items():
            middle = instance.segments[a].target
            cheapest[middle] = min(cheapest.get(middle, 0.0), cost)
        self.suffix_bound = [0.0] * (len(self.order) + 1)
        for position in range(len(self.order) - 1, -1, -1):
            self.suffix_bound[position] = self.suffix_bound[position + 1] + cheapest.get(self.order[position], 0.0)

        self.incoming = {h: -1 for h in hits}
        self.waiting: dict[int, int] = {}
        for h in hits:
            if layer_of[h] >= 2:
                self.waiting[layer_of[h]] = self.waiting.get(layer_of[h], 0) + 1
        self.chosen: list[int] = []
        self.best_cost = float("inf")
        self.best_choice: list[int] | None = None
        self.nodes = 0

    def seed(self, assignment: list[int]) -> None:
        """Start from the component's part of a feasible assignment"""
        segments = self.instance.segments
        members = set(self.incoming)
        chosen = [s for s, bit in enumerate(assignment) if bit and segments[s].source in members]
        selected = set(chosen)
        cost = 0.0
        for s in chosen:
            for b in self.instance.out_segments[segments[s].target]:
                if b in selected:
                    cost += self.costs.get((s, b), 0.0)
        self.best_cost = cost
        self.best_choice = chosen

    def run(self) -> tuple[float, list[int]]:
        self._visit(0, 0.0)
        if self.best_choice is None:
            raise InfeasibleInstanceError(
                f"structurally infeasible instance: no feasible tracks through hits {self.order[:5]}"
            )
        return self.best_cost, self.best_choice

    def _visit(self, position: int, partial: float) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % _DEADLINE_STRIDE == 1 and time.monotonic() > self.deadline:
            raise SolveTimeoutError(f"exact search exceeded its time limit after {self.nodes} nodes")

        if position == len(self.order):
            if all(self.incoming[h] >= 0 for h in self.terminals) and partial < self.best_cost:
                self.best_cost = partial
                self.best_choice = list(self.chosen)
            return

        if self.prune and self.best_choice is not None:
            tolerance = 1e-9 * max(1.0, abs(self.best_cost))
            if partial + self.suffix_bound[position] >= self.best_cost + tolerance:
                return

        hit = self.order[position]
        before = self.incoming[hit]
        if self.needs_input[position] and before < 0:
            return
        layer = self.layer_of[hit]
        if self.waiting.get(layer + 1, 0) > self.layer_end[position] - position:
            return

        segments = self.instance.segments
        closes = self.closes[position]
        for s in self.instance.out_segments[hit]:
            target = segments[s].target
            if self.incoming[target] >= 0:
                continue
            step = self.costs.get((before, s), 0.0) if before >= 0 else 0.0
            self.incoming[target] = s
            self.waiting[self.layer_of[target]] -= 1
            if all(self.incoming[h] >= 0 for h in closes):
                self.chosen.append(s)
                self._visit(position + 1, partial + step)
                self.chosen.pop()
            self.waiting[self.layer_of[target]] += 1
            self.incoming[target] = -1


def exact_search(
    instance: Instance,
    alpha: float = 100.0,
    *,
    max_hits_per_layer: int = 8,
    prune: bool = True,
    deadline: float | None = None,
    model: ConstrainedModel | None = None,
) -> SolveReport:
    """Provably optimal feasible assignment of the constrained model"""
    start = time.perf_counter()
    model = model or build_qcbm(instance, alpha)
    costs = {(a, b): coef for a, b, coef in model.quadratic}

    components = connected_components(instance)
    for hits in components:
        per_layer: dict[int, int] = {}
        for h in hits:
            layer = instance.hits[h].layer
            per_layer[layer] = per_layer.get(layer, 0) + 1
        widest = max(per_layer.values())
        if widest > max_hits_per_layer:
            raise InstanceTooLargeError(
                f"instance too large for exact search: {widest} hits on one layer of a component "
                f"(cap {max_hits_per_layer})"
            )

    depth = len(instance.hits) + 100
    if sys.getrecursionlimit() < depth:
        sys.setrecursionlimit(depth)

    incumbent = _incumbent(instance, alpha, model)
    assignment = [0] * len(instance.segments)
    nodes = 0
    for hits in components:
        search = _ComponentSearch(instance, hits, costs, prune, deadline)
        if incumbent is not None:
            search.seed(incumbent)
        _, choice = search.run()
        nodes += search.nodes
        for s in choice:
            assignment[s] = 1

    objective = model.objective(assignment)
    wall_time = time.perf_counter() - start
    logger.info(
        f"Exact search finished: objective {objective:.6f} over {len(components)} components, "
        f"{nodes} nodes, {wall_time:.3f}s"
    )
    return SolveReport(
        method="exact",
        assignment=assignment,
        objective=objective,
        energy=objective,
        feasible=True,
        tracks=decode_tracks(instance, assignment),
        wall_time=wall_time,
    )
