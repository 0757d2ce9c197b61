"""Build the model a method needs, solve, repair and decode"""

import logging
import time

from trackfind.errors import RepairError, UsageError
from trackfind.models import AnnealSchedule, Instance, SolveReport
from trackfind.solvers.annealing import simulated_annealing
from trackfind.solvers.decoding import decode_tracks, repair
from trackfind.solvers.exact import exact_search
from trackfind.solvers.greedy import greedy_baseline
from trackfind.utils.formulations import build_qcbm, build_qubm

logger = logging.getLogger(__name__)

METHODS = ("sa", "exact", "greedy")


def _run_annealing(
    instance: Instance,
    alpha: float,
    gamma: float,
    schedule: AnnealSchedule,
    deadline: float | None,
) -> SolveReport:
    build_start = time.perf_counter()
    model = build_qubm(instance, alpha, gamma)
    preprocessing_time = time.perf_counter() - build_start

    solve_start = time.perf_counter()
    raw = simulated_annealing(model, schedule, deadline=deadline)
    assignment = raw.assignment
    repaired = False
    if not raw.feasible:
        try:
            assignment = repair(instance, raw.assignment, alpha)
            repaired = True
        except RepairError:
            logger.warning("Repair failed, reporting the raw annealing assignment")

    feasible = model.is_feasible(assignment)
    return raw.model_copy(
        update={
            "assignment": assignment,
            "objective": model.cost(assignment),
            "energy": model.energy(assignment),
            "feasible": feasible,
            "tracks": decode_tracks(instance, assignment) if feasible else None,
            "wall_time": time.perf_counter() - solve_start,
            "raw_objective": raw.objective,
            "raw_feasible": raw.feasible,
            "repaired": repaired,
            "preprocessing_time": preprocessing_time,
        }
    )


def run_method(
    instance: Instance,
    method: str,
    *,
    alpha: float = 100.0,
    gamma: float = 1.0,
    schedule: AnnealSchedule | None = None,
    exact_cap: int = 8,
    deadline: float | None = None,
) -> SolveReport:
    """
    Solve one instance with one method.

    The report's preprocessing_time covers model building, wall_time the
    solve (and, for annealing, the repair).
    """
    if method == "sa":
        return _run_annealing(instance, alpha, gamma, schedule or AnnealSchedule(), deadline)

    if method not in METHODS:
        raise UsageError(f"unknown method '{method}', expected one of {', '.join(METHODS)}")

    build_start = time.perf_counter()
    model = build_qcbm(instance, alpha)
    preprocessing_time = time.perf_counter() - build_start

    if method == "exact":
        report = exact_search(instance, alpha, max_hits_per_layer=exact_cap, deadline=deadline, model=model)
    else:
        report = greedy_baseline(instance, alpha, model=model)
    return report.model_copy(update={"preprocessing_time": preprocessing_time})
