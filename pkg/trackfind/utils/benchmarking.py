"""Benchmark runner, optimality gap and the results CSV"""

import csv
import logging
import time
from pathlib import Path

from trackfind.errors import (
    InstanceTooLargeError,
    MissingTruthError,
    NoMethodsError,
    ResultsFormatError,
    SolveTimeoutError,
    UndefinedGapError,
    UsageError,
)
from trackfind.models import AnnealSchedule, BenchRow, Instance, SolveReport
from trackfind.solvers.pipeline import METHODS, run_method
from trackfind.utils.geometry import true_cost
from trackfind.utils.instance_io import read_instance
from trackfind.utils.monitoring import BenchStore

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ["instance", "no_hits", "method", "S_star", "S", "TP", "TR", "TT", "GAP", "feasible", "seed"]

# Seed distance between two instance x method cells
CELL_SEED_STRIDE = 1000


def gap(computed: float, reference: float) -> float:
    """Percent excess of computed over reference; positive means worse"""
    if reference == 0.0:
        raise UndefinedGapError()
    return (computed - reference) / abs(reference) * 100.0


def _ms(seconds: float) -> float:
    return round(seconds, 3)


def _solve_cell(
    instance: Instance,
    method: str,
    *,
    alpha: float,
    gamma: float,
    schedule: AnnealSchedule,
    exact_cap: int,
    time_limit: float | None,
) -> tuple[str, SolveReport | None]:
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    try:
        report = run_method(
            instance,
            method,
            alpha=alpha,
            gamma=gamma,
            schedule=schedule,
            exact_cap=exact_cap,
            deadline=deadline,
        )
    except SolveTimeoutError as e:
        logger.warning(f"{method}: {e.detail}")
        return "timeout", None
    except InstanceTooLargeError as e:
        logger.warning(f"{method}: skipped, {e.detail}")
        return "skipped", None
    return ("true" if report.feasible else "false"), report


def run_bench(
    instance_paths: list[str | Path],
    methods: list[str],
    *,
    alpha: float = 100.0,
    gamma: float = 1.0,
    time_limit: float | None = 360.0,
    seed: int = 0,
    schedule: AnnealSchedule | None = None,
    exact_cap: int = 8,
    store: BenchStore | None = None,
) -> list[BenchRow]:
    """
    Solve every instance with every method and score the results.

    The reference objective is the exact optimum when an exact run on the
    same instance is feasible, otherwise alpha x the ground-truth cost. Cell
    c (instance-major order) is seeded seed + 1000 x c. Returns the result
    rows followed by one AVERAGE row per method.
    """
    if not methods:
        raise NoMethodsError()
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise UsageError(f"unknown method(s) {', '.join(unknown)}, expected a subset of {', '.join(METHODS)}")

    store = store or BenchStore()
    schedule = schedule or AnnealSchedule()
    # Exact runs first so its optimum can serve as the reference
    order = sorted(range(len(methods)), key=lambda m: methods[m] != "exact")

    for index, path in enumerate(instance_paths):
        parse_start = time.perf_counter()
        instance = read_instance(path)
        parse_time = time.perf_counter() - parse_start
        name = Path(path).stem
        no_hits = len(instance.hits)

        outcomes: dict[int, tuple[str, SolveReport | None, int]] = {}
        reference: float | None = None
        for m in order:
            cell_seed = seed + CELL_SEED_STRIDE * (index * len(methods) + m)
            status, report = _solve_cell(
                instance,
                methods[m],
                alpha=alpha,
                gamma=gamma,
                schedule=schedule.model_copy(update={"seed": cell_seed}),
                exact_cap=exact_cap,
                time_limit=time_limit,
            )
            outcomes[m] = (status, report, cell_seed)
            if methods[m] == "exact" and status == "true" and report is not None:
                reference = report.objective

        if reference is None:
            try:
                reference = alpha * true_cost(instance)
                logger.warning(f"{name}: no exact optimum, scoring against alpha x true cost")
            except MissingTruthError:
                logger.warning(f"{name}: no exact optimum and no ground truth, gaps left empty")

        for m, method in enumerate(methods):
            status, report, cell_seed = outcomes[m]
            tp = _ms(parse_time + (report.preprocessing_time if report else 0.0))
            tr = _ms(report.wall_time) if report else 0.0
            score = None
            if report is not None and status == "true" and reference is not None:
                score = gap(report.objective, reference)
            row = BenchRow(
                instance=name,
                no_hits=no_hits,
                method=method,
                s_star=reference,
                s=report.objective if report else None,
                tp=tp,
                tr=tr,
                tt=tp + tr,
                gap=score,
                feasible=status,
                seed=cell_seed,
            )
            store.record_row(row)
            logger.info(f"{name} {method}: status={status} S={row.s} GAP={row.gap} TT={row.tt:.3f}s")

    return store.rows + store.summary_rows()


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_bench_csv(rows: list[BenchRow], path: str | Path) -> None:
    """Write rows with the fixed column set; floats use their shortest exact form"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        for row in rows:
            record = row.model_dump(by_alias=True)
            writer.writerow([_cell(record[column]) for column in BENCH_COLUMNS])
    logger.info(f"Wrote {len(rows)} rows to {path}")


def read_bench_csv(path: str | Path) -> list[BenchRow]:
    """Parse a CSV written by write_bench_csv"""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != BENCH_COLUMNS:
            raise ResultsFormatError(f"unexpected CSV columns {reader.fieldnames}")
        rows = []
        for number, record in enumerate(reader, start=2):
            values = {column: (record[column] if record[column] != "" else None) for column in BENCH_COLUMNS}
            try:
                rows.append(BenchRow.model_validate(values))
            except ValueError as e:
                raise ResultsFormatError(f"row {number}: {e}")
    return rows
