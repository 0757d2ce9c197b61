"""SVG charts of benchmark results"""

import logging
from pathlib import Path
from typing import Literal

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from trackfind.errors import EmptyResultsError  # noqa: E402
from trackfind.models import BenchRow  # noqa: E402
from trackfind.utils.benchmarking import read_bench_csv  # noqa: E402
from trackfind.utils.monitoring import SUMMARY_INSTANCE  # noqa: E402

logger = logging.getLogger(__name__)

Axis = Literal["gap", "time"]

# Floor for total times on the log axis
MIN_PLOTTED_SECONDS = 1e-4

_LABELS = {
    "gap": "GAP (%)",
    "time": "Total time TT (s)",
}


def _series(rows: list[BenchRow], axis: Axis) -> dict[str, list[tuple[int, float]]]:
    """Per-method (hit count, value) points in x order"""
    series: dict[str, list[tuple[int, str, float]]] = {}
    for row in rows:
        if row.instance == SUMMARY_INSTANCE or row.feasible in ("timeout", "skipped"):
            continue
        if axis == "gap":
            if row.gap is None:
                continue
            value = row.gap
        else:
            value = max(row.tt, MIN_PLOTTED_SECONDS)
        series.setdefault(row.method, []).append((row.no_hits, row.instance, value))
    return {method: [(x, y) for x, _, y in sorted(points)] for method, points in series.items()}


def plot(csv_path: str | Path, axis: Axis, output_path: str | Path) -> None:
    """
    Draw one line per method against the hit count and save it as SVG.

    Identical CSV input gives identical SVG bytes.
    """
    path = Path(csv_path)
    if path.stat().st_size == 0:
        raise EmptyResultsError(f"{csv_path} is empty")
    series = _series(read_bench_csv(path), axis)
    if not series:
        raise EmptyResultsError(f"{csv_path} has no plottable {axis} rows")

    with plt.rc_context({"svg.hashsalt": "trackfind", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        try:
            for method in sorted(series):
                xs = [x for x, _ in series[method]]
                ys = [y for _, y in series[method]]
                (line,) = ax.plot(xs, ys, marker="o", linewidth=1.2, label=method)
                line.set_gid(f"series-{method}")

            if axis == "time":
                ax.set_yscale("log")
            ax.set_xlabel("Number of hits")
            ax.set_ylabel(_LABELS[axis])
            ax.grid(True, linewidth=0.3)
            ax.legend()
            fig.tight_layout()
            fig.savefig(output_path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    logger.info(f"Wrote {axis} plot of {len(series)} method(s) to {output_path}")
