"""Tests for the gap, the benchmark runner and the results CSV"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trackfind.errors import NoMethodsError, UndefinedGapError, UsageError
from trackfind.models import AnnealSchedule, BenchRow, GeneratorConfig
from trackfind.utils.benchmarking import BENCH_COLUMNS, gap, read_bench_csv, run_bench, write_bench_csv
from trackfind.utils.generator import generate_event
from trackfind.utils.instance_io import write_instance

nonzero = st.floats(min_value=-1e6, max_value=-1e-3) | st.floats(min_value=1e-3, max_value=1e6)


def test_gap_examples():
    assert gap(-200.0, -200.0) == 0.0
    assert gap(-190.0, -200.0) == pytest.approx(5.0)
    assert gap(-210.0, -200.0) == pytest.approx(-5.0)


def test_gap_zero_reference():
    with pytest.raises(UndefinedGapError, match="undefined gap"):
        gap(1.0, 0.0)


@given(reference=nonzero)
def test_gap_of_reference_is_zero(reference):
    assert gap(reference, reference) == 0.0


@given(reference=st.floats(min_value=-1e6, max_value=-1e-3), computed=st.floats(min_value=-1e6, max_value=1e6))
def test_gap_sign_follows_excess(reference, computed):
    result = gap(computed, reference)
    if computed > reference:
        assert result > 0
    elif computed < reference:
        assert result < 0


@pytest.fixture
def suite(tmp_path):
    paths = []
    for seed in (1, 2):
        path = tmp_path / f"event_{seed}.tf"
        write_instance(generate_event(GeneratorConfig(num_tracks=5, num_layers=5, seed=seed)), path)
        paths.append(path)
    return paths


def test_run_bench_rows(suite):
    rows = run_bench(suite, ["sa", "exact"], schedule=AnnealSchedule(sweeps=50, restarts=5), seed=3)
    results = [r for r in rows if r.instance != "AVERAGE"]
    summary = [r for r in rows if r.instance == "AVERAGE"]
    assert [(r.instance, r.method) for r in results] == [
        ("event_1", "sa"),
        ("event_1", "exact"),
        ("event_2", "sa"),
        ("event_2", "exact"),
    ]
    assert [r.seed for r in results] == [3, 1003, 2003, 3003]
    for row in results:
        assert row.no_hits == 25
        assert row.tt == pytest.approx(row.tp + row.tr, abs=1e-9)
        assert row.tp == round(row.tp, 3)
    for row in results:
        if row.method == "exact":
            assert row.feasible == "true"
            assert row.gap == 0.0
            assert row.s == row.s_star
    assert {r.method for r in summary} == {"sa", "exact"}


def test_reference_falls_back_to_truth(suite):
    rows = run_bench(suite[:1], ["greedy"])
    row = rows[0]
    assert row.s_star is not None and row.s_star < 0
    if row.feasible == "true":
        assert row.gap is not None


def test_exact_over_cap_is_skipped(suite):
    rows = run_bench(suite[:1], ["exact"], exact_cap=1)
    assert rows[0].feasible == "skipped"
    assert rows[0].s is None and rows[0].gap is None


def test_timeout_rows(suite):
    rows = run_bench(suite[:1], ["sa"], time_limit=-1.0)
    assert rows[0].feasible == "timeout"
    assert rows[0].gap is None


def test_no_methods(suite):
    with pytest.raises(NoMethodsError, match="no methods"):
        run_bench(suite, [])
    with pytest.raises(UsageError):
        run_bench(suite, ["cplex"])


def test_csv_round_trip(tmp_path, suite):
    rows = run_bench(suite, ["sa", "greedy"], schedule=AnnealSchedule(sweeps=20, restarts=2))
    path = tmp_path / "results.csv"
    write_bench_csv(rows, path)
    assert path.read_text().splitlines()[0] == ",".join(BENCH_COLUMNS)
    assert read_bench_csv(path) == rows


def test_csv_keeps_empty_cells(tmp_path):
    row = BenchRow(instance="x", no_hits=7, method="exact", tp=0.001, tr=0.0, tt=0.001, feasible="timeout", seed=0)
    path = tmp_path / "results.csv"
    write_bench_csv([row], path)
    assert path.read_text().splitlines()[1] == "x,7,exact,,,0.001,0.0,0.001,,timeout,0"
    assert read_bench_csv(path) == [row]


@pytest.mark.slow
def test_small_suite_gaps(tmp_path):
    """Ten small-preset events: exact gaps vanish and annealing stays within one percent"""
    paths = []
    for seed in range(1, 11):
        path = tmp_path / f"small_{seed}.tf"
        write_instance(generate_event(GeneratorConfig(preset="small", seed=seed)), path)
        paths.append(path)
    rows = run_bench(paths, ["sa", "exact"], exact_cap=100)
    results = [r for r in rows if r.instance != "AVERAGE"]
    sa_gaps = [r.gap for r in results if r.method == "sa"]
    assert all(r.gap == 0.0 for r in results if r.method == "exact")
    assert all(g is not None and g <= 1.0 for g in sa_gaps)
    assert sum(sa_gaps) / len(sa_gaps) <= 0.5
