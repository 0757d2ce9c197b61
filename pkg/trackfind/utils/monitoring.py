"""Solve metrics collection and benchmark aggregation"""

import logging
from collections import defaultdict
from pathlib import Path

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile

from trackfind.models import BenchRow

logger = logging.getLogger(__name__)


# Prometheus metrics
SOLVE_COUNT = Counter("trackfind_solves_total", "Total solver runs", ["method", "status"])

SOLVE_DURATION = Histogram(
    "trackfind_solve_duration_seconds",
    "Solve time in seconds",
    ["method"],
    buckets=(0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 60.0, 360.0, float("inf")),
)

PREPROCESS_DURATION = Histogram(
    "trackfind_preprocess_duration_seconds",
    "Instance parse and model build time in seconds",
    ["method"],
    buckets=(0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 60.0, float("inf")),
)

SA_ACCEPTED_FLIPS = Counter("trackfind_sa_accepted_flips_total", "Accepted single-bit flips in annealing")

# Instance name of the per-method average rows
SUMMARY_INSTANCE = "AVERAGE"


class BenchStore:
    """In-memory store of benchmark rows with per-method aggregates"""

    def __init__(self):
        self.rows: list[BenchRow] = []
        self.method_stats = defaultdict(
            lambda: {
                "runs": 0,
                "solved": 0,
                "total_tp": 0.0,
                "total_tr": 0.0,
                "gaps": [],
                "timeouts": 0,
                "infeasible": 0,
                "skipped": 0,
            }
        )

    def record_row(self, row: BenchRow) -> None:
        """Record one instance x method result"""
        self.rows.append(row)
        stats = self.method_stats[row.method]
        stats["runs"] += 1
        # Timeout and skipped rows carry no solve time
        if row.feasible in ("true", "false"):
            stats["solved"] += 1
            stats["total_tp"] += row.tp
            stats["total_tr"] += row.tr

        if row.feasible == "timeout":
            stats["timeouts"] += 1
        elif row.feasible == "skipped":
            stats["skipped"] += 1
        elif row.feasible == "false":
            stats["infeasible"] += 1

        if row.gap is not None:
            stats["gaps"].append(row.gap)

        SOLVE_COUNT.labels(method=row.method, status=row.feasible).inc()
        SOLVE_DURATION.labels(method=row.method).observe(row.tr)
        PREPROCESS_DURATION.labels(method=row.method).observe(row.tp)

    def get_stats(self) -> dict:
        """
        Aggregated statistics per method

        Returns:
            method -> runs, ATP, ATR, ATT (over solved runs), AGAP and status counts
        """
        breakdown = {}
        for method, stats in self.method_stats.items():
            runs = stats["runs"]
            if runs == 0:
                continue
            gaps = stats["gaps"]
            solved = stats["solved"]
            atp = stats["total_tp"] / solved if solved else 0.0
            atr = stats["total_tr"] / solved if solved else 0.0
            breakdown[method] = {
                "runs": runs,
                "solved": solved,
                "atp": atp,
                "atr": atr,
                "att": atp + atr,
                "agap": sum(gaps) / len(gaps) if gaps else None,
                "timeouts": stats["timeouts"],
                "infeasible": stats["infeasible"],
                "skipped": stats["skipped"],
            }
        return breakdown

    def summary_rows(self) -> list[BenchRow]:
        """ATT/AGAP lines, one per method in first-seen order"""
        rows = []
        for method, stats in self.get_stats().items():
            no_hits = [row.no_hits for row in self.rows if row.method == method]
            rows.append(
                BenchRow(
                    instance=SUMMARY_INSTANCE,
                    no_hits=round(sum(no_hits) / len(no_hits)),
                    method=method,
                    tp=stats["atp"],
                    tr=stats["atr"],
                    tt=stats["atp"] + stats["atr"],
                    gap=stats["agap"],
                    feasible="true" if stats["infeasible"] + stats["timeouts"] == 0 else "false",
                )
            )
        return rows


def export_prometheus_metrics(path: str | Path) -> None:
    """Write collected metrics in the Prometheus text format"""
    write_to_textfile(str(path), REGISTRY)
    logger.info(f"Wrote metrics to {path}")
