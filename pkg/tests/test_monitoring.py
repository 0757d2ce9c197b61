"""Tests for benchmark aggregation and metrics export"""

import pytest

from trackfind.models import BenchRow
from trackfind.utils.monitoring import SUMMARY_INSTANCE, BenchStore, export_prometheus_metrics


def _row(method: str, tp: float, tr: float, gap: float | None, feasible: str = "true") -> BenchRow:
    return BenchRow(instance="i", no_hits=70, method=method, tp=tp, tr=tr, tt=tp + tr, gap=gap, feasible=feasible)


def test_stats_per_method():
    store = BenchStore()
    store.record_row(_row("sa", 0.1, 0.3, 0.5))
    store.record_row(_row("sa", 0.3, 0.1, 1.5))
    store.record_row(_row("exact", 0.1, 9.0, None, feasible="timeout"))

    stats = store.get_stats()
    assert stats["sa"]["runs"] == 2
    assert stats["sa"]["atp"] == pytest.approx(0.2)
    assert stats["sa"]["att"] == pytest.approx(0.4)
    assert stats["sa"]["agap"] == pytest.approx(1.0)
    assert stats["exact"]["timeouts"] == 1
    assert stats["exact"]["agap"] is None


def test_times_average_over_solved_runs():
    store = BenchStore()
    store.record_row(_row("exact", 0.2, 2.0, 0.0))
    store.record_row(_row("exact", 0.4, 0.0, None, feasible="timeout"))
    store.record_row(_row("exact", 0.4, 0.0, None, feasible="skipped"))

    stats = store.get_stats()["exact"]
    assert stats["runs"] == 3
    assert stats["solved"] == 1
    assert stats["atr"] == pytest.approx(2.0)
    assert stats["att"] == pytest.approx(2.2)


def test_summary_rows():
    store = BenchStore()
    store.record_row(_row("greedy", 0.0, 0.01, 4.0))
    store.record_row(_row("greedy", 0.0, 0.03, 2.0, feasible="false"))
    (summary,) = store.summary_rows()
    assert summary.instance == SUMMARY_INSTANCE
    assert summary.method == "greedy"
    assert summary.tt == pytest.approx(0.02)
    assert summary.gap == pytest.approx(3.0)
    assert summary.feasible == "false"


def test_export_metrics(tmp_path):
    store = BenchStore()
    store.record_row(_row("sa", 0.1, 0.2, 0.0))
    path = tmp_path / "metrics.prom"
    export_prometheus_metrics(path)
    text = path.read_text()
    assert "trackfind_solves_total" in text
    assert 'method="sa"' in text
