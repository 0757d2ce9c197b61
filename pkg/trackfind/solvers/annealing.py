"""Simulated annealing over a QUBO model (single-bit-flip Metropolis dynamics)"""

import logging
import time

import numpy as np

from trackfind.errors import SolveTimeoutError
from trackfind.models import AnnealSchedule, SolveReport
from trackfind.solvers.decoding import trace_paths
from trackfind.utils.formulations import QuboModel, qubo_energy
from trackfind.utils.monitoring import SA_ACCEPTED_FLIPS

logger = logging.getLogger(__name__)

Adjacency = list[list[tuple[int, float]]]


def build_adjacency(model: QuboModel) -> Adjacency:
    """Incident (neighbor, coefficient) pairs per variable"""
    neighbors: Adjacency = [[] for _ in range(model.num_vars)]
    for (a, b), coef in model.quadratic.items():
        neighbors[a].append((b, coef))
        neighbors[b].append((a, coef))
    return neighbors


class LocalFieldState:
    """
    Assignment with cached local fields.

    field[i] = linear[i] + sum_j Q_ij x_j, so flipping i changes the energy by
    field[i] when x_i = 0 and by -field[i] when x_i = 1.
    """

    def __init__(self, model: QuboModel, assignment: list[int], adjacency: Adjacency | None = None):
        self.neighbors = adjacency if adjacency is not None else build_adjacency(model)
        self.x = [1 if bit else 0 for bit in assignment]
        self.field = list(model.linear)
        for i, bit in enumerate(self.x):
            if bit:
                for j, coef in self.neighbors[i]:
                    self.field[j] += coef
        self.energy = qubo_energy(model, self.x)

    def delta(self, i: int) -> float:
        return -self.field[i] if self.x[i] else self.field[i]

    def flip(self, i: int) -> None:
        step = -1 if self.x[i] else 1
        self.energy += step * self.field[i]
        self.x[i] ^= 1
        field = self.field
        for j, coef in self.neighbors[i]:
            field[j] += step * coef


def initial_temperature(model: QuboModel) -> float:
    """Largest absolute single-flip energy change from the all-zero state"""
    largest = max((abs(c) for c in model.linear), default=0.0)
    if largest == 0.0:
        largest = max((abs(c) for c in model.quadratic.values()), default=1.0)
    return largest


def temperature_ladder(model: QuboModel, schedule: AnnealSchedule) -> np.ndarray:
    start = initial_temperature(model) if schedule.initial_temperature == "auto" else schedule.initial_temperature
    stop = schedule.final_temperature if schedule.final_temperature is not None else schedule.final_ratio * start
    return np.geomspace(start, stop, schedule.sweeps)


def _anneal_once(
    model: QuboModel,
    adjacency: Adjacency,
    temperatures: np.ndarray,
    seed: int,
    deadline: float | None,
) -> tuple[list[int], float, int]:
    rng = np.random.default_rng(seed)
    n = model.num_vars
    state = LocalFieldState(model, rng.integers(0, 2, size=n).tolist(), adjacency)
    best_x = list(state.x)
    best_energy = state.energy
    accepted = 0

    x = state.x
    field = state.field
    for temperature in temperatures.tolist():
        if deadline is not None and time.monotonic() > deadline:
            raise SolveTimeoutError(f"annealing exceeded its time limit after {accepted} accepted flips")
        # delta accepted iff delta < -T log(u), u in (0, 1]
        thresholds = (-temperature * np.log(1.0 - rng.random(n))).tolist()
        for i in range(n):
            delta = -field[i] if x[i] else field[i]
            if delta <= 0.0 or delta < thresholds[i]:
                state.flip(i)
                accepted += 1
        if state.energy < best_energy:
            best_energy = state.energy
            best_x = list(x)

    return best_x, qubo_energy(model, best_x), accepted


def simulated_annealing(
    model: QuboModel,
    schedule: AnnealSchedule | None = None,
    *,
    deadline: float | None = None,
) -> SolveReport:
    """
    Best assignment over all restarts.

    Restart r is seeded with schedule.seed + r and runs one full sweep per
    temperature of a geometric ladder; the best state is tracked at the end of
    every sweep.
    """
    schedule = schedule or AnnealSchedule()
    start = time.perf_counter()
    adjacency = build_adjacency(model)
    temperatures = temperature_ladder(model, schedule)

    best_x: list[int] = [0] * model.num_vars
    best_energy = float("inf")
    for restart in range(schedule.restarts):
        x, energy, accepted = _anneal_once(model, adjacency, temperatures, schedule.seed + restart, deadline)
        SA_ACCEPTED_FLIPS.inc(accepted)
        logger.debug(f"Restart {restart}: energy {energy:.6f}, {accepted} accepted flips")
        if energy < best_energy:
            best_energy = energy
            best_x = x

    feasible = model.is_feasible(best_x)
    tracks = None
    if feasible and model.variables:
        tracks = trace_paths([model.variables[s] for s, bit in enumerate(best_x) if bit])

    wall_time = time.perf_counter() - start
    logger.info(f"Annealing finished: energy {best_energy:.6f}, feasible={feasible}, {wall_time:.3f}s")
    return SolveReport(
        method="sa",
        assignment=best_x,
        objective=model.cost(best_x),
        energy=best_energy,
        feasible=feasible,
        tracks=tracks,
        wall_time=wall_time,
        seed=schedule.seed,
    )
