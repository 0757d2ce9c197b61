"""Tests for simulated annealing"""

import time

import numpy as np
import pytest

from trackfind.errors import SolveTimeoutError
from trackfind.models import AnnealSchedule, GeneratorConfig
from trackfind.solvers.annealing import LocalFieldState, simulated_annealing, temperature_ladder
from trackfind.solvers.exact import exact_search
from trackfind.solvers.pipeline import run_method
from trackfind.utils.formulations import QuboModel, build_qubm, qubo_energy
from trackfind.utils.generator import generate_event


def test_incremental_delta_matches_full_energy(small_event):
    model = build_qubm(small_event)
    rng = np.random.default_rng(7)
    state = LocalFieldState(model, rng.integers(0, 2, size=model.num_vars).tolist())
    for i in rng.integers(0, model.num_vars, size=1000).tolist():
        before = qubo_energy(model, state.x)
        delta = state.delta(i)
        state.flip(i)
        after = qubo_energy(model, state.x)
        assert after - before == pytest.approx(delta, abs=1e-9)
        assert state.energy == pytest.approx(after, abs=1e-6)


def test_ladder_is_geometric(two_tracks):
    model = build_qubm(two_tracks)
    ladder = temperature_ladder(model, AnnealSchedule(sweeps=5))
    assert ladder[0] == pytest.approx(max(abs(c) for c in model.linear))
    assert ladder[-1] == pytest.approx(1e-3 * ladder[0])
    ratios = ladder[1:] / ladder[:-1]
    assert np.allclose(ratios, ratios[0])


def test_seed_determinism(small_event):
    model = build_qubm(small_event)
    schedule = AnnealSchedule(sweeps=30, restarts=3, seed=11)
    first = simulated_annealing(model, schedule)
    second = simulated_annealing(model, schedule)
    assert first.assignment == second.assignment
    assert first.energy == second.energy


def test_finds_optimum_on_small_event(small_event):
    model = build_qubm(small_event)
    report = simulated_annealing(model, AnnealSchedule(seed=1))
    optimum = exact_search(small_event)
    assert report.feasible
    assert report.energy == pytest.approx(qubo_energy(model, report.assignment))
    assert report.objective == pytest.approx(optimum.objective, abs=1e-9)
    assert report.tracks == optimum.tracks


def test_expired_deadline(two_tracks):
    model = build_qubm(two_tracks)
    with pytest.raises(SolveTimeoutError):
        simulated_annealing(model, AnnealSchedule(), deadline=time.monotonic() - 1.0)


def test_more_restarts_never_worse(small_event):
    model = build_qubm(small_event)
    energies = [
        simulated_annealing(model, AnnealSchedule(sweeps=10, restarts=r, seed=4)).energy for r in range(1, 5)
    ]
    assert all(later <= earlier for earlier, later in zip(energies, energies[1:]))


@pytest.mark.slow
def test_reaches_optimum_on_small_instances():
    """At least 95 of 100 seeded runs hit the exact optimum on four-track, four-layer events"""
    hits = 0
    for seed in range(100):
        instance = generate_event(GeneratorConfig(num_tracks=4, num_layers=4, seed=seed, track_pitch=20.0))
        optimum = exact_search(instance).objective
        report = simulated_annealing(build_qubm(instance), AnnealSchedule(seed=seed))
        hits += report.feasible and abs(report.objective - optimum) <= 1e-9 * max(1.0, abs(optimum))
    assert hits >= 95


def _linear_model(linear: list[float], offset: float) -> QuboModel:
    return QuboModel(num_vars=len(linear), linear=linear, quadratic={}, offset=offset, alpha=1.0, gamma=1.0)


def test_positive_linear_terms_give_all_zero():
    report = simulated_annealing(_linear_model([1.0, 2.5, 0.25, 4.0], offset=3.0), AnnealSchedule(seed=2))
    assert report.assignment == [0, 0, 0, 0]
    assert report.energy == pytest.approx(3.0)


def test_negative_linear_terms_give_all_one():
    report = simulated_annealing(_linear_model([-1.0, -2.5, -0.25, -4.0], offset=3.0), AnnealSchedule(seed=2))
    assert report.assignment == [1, 1, 1, 1]
    assert report.energy == pytest.approx(3.0 - 7.75)


def test_repaired_report_energy_matches_assignment(small_event):
    model = build_qubm(small_event, alpha=100.0, gamma=1e-3)
    report = run_method(small_event, "sa", gamma=1e-3, schedule=AnnealSchedule(sweeps=30, restarts=2, seed=0))
    assert report.repaired
    assert report.feasible
    assert report.energy == pytest.approx(model.energy(report.assignment))
    assert report.objective == pytest.approx(report.energy - model.penalty(report.assignment))
