"""Tests for the constrained, penalty and linearized models"""

import numpy as np
import pytest

from tests.conftest import build_instance, tiny_event
from trackfind.errors import DimensionError, InfeasibleInstanceError
from trackfind.solvers.decoding import truth_assignment
from trackfind.utils.formulations import (
    all_assignments,
    build_blp,
    build_qcbm,
    build_qubm,
    check_feasible,
    enumerate_qubo,
    qubo_energy,
)

SEEDS = range(50)


def _bits(row) -> list[int]:
    return [int(b) for b in row]


def test_qubm_energy_matches_qcbm_on_feasible(two_tracks):
    qcbm = build_qcbm(two_tracks)
    qubm = build_qubm(two_tracks)
    feasible = 0
    for row in all_assignments(qcbm.num_vars):
        x = _bits(row)
        if qcbm.is_feasible(x):
            feasible += 1
            assert qubm.energy(x) == pytest.approx(qcbm.objective(x), abs=1e-9)
    # Two tracks over three layers: 2 x 2 permutations
    assert feasible == 4


def test_truth_is_feasible_and_scored(two_tracks):
    x = truth_assignment(two_tracks)
    qubm = build_qubm(two_tracks, alpha=100.0)
    assert qubm.penalty(x) == 0.0
    assert qubm.cost(x) == pytest.approx(100.0 * 2 * (-1 / 200))


@pytest.mark.parametrize("seed", SEEDS)
def test_formulations_agree(seed):
    instance = tiny_event(seed)
    qcbm = build_qcbm(instance)
    qubm = build_qubm(instance, alpha=100.0, gamma=1.0)
    blp = build_blp(instance)
    assert qcbm.num_vars <= 10

    best_feasible = None
    for row in all_assignments(qcbm.num_vars):
        x = _bits(row)
        feasible = qcbm.is_feasible(x)
        penalty = qubm.penalty(x)
        assert penalty >= 0.0
        assert (penalty == 0.0) == feasible

        z = blp.product_z(x)
        assert blp.satisfies(x, z) == feasible
        assert blp.objective_value(x, z) == qcbm.objective(x)

        if feasible:
            assert qubm.energy(x) == pytest.approx(qcbm.objective(x), abs=1e-9)
            value = qcbm.objective(x)
            best_feasible = value if best_feasible is None else min(best_feasible, value)

    assignments, energies = enumerate_qubo(qubm)
    mask = np.array([qcbm.is_feasible(_bits(row)) for row in assignments])
    assert energies[mask].min() == pytest.approx(best_feasible, abs=1e-9)


def test_blp_rejects_inconsistent_products(two_tracks):
    blp = build_blp(two_tracks)
    x = truth_assignment(two_tracks)
    z = blp.product_z(x)
    flipped = [1 - z[0]] + z[1:]
    assert not blp.satisfies(x, flipped)
    assert len(blp.rows) == 8 + 5 * blp.num_z


def test_enumerate_matches_scalar_energy(two_tracks):
    qubm = build_qubm(two_tracks, gamma=3.0)
    assignments, energies = enumerate_qubo(qubm)
    for index in (0, 1, 77, len(assignments) - 1):
        assert energies[index] == pytest.approx(qubo_energy(qubm, _bits(assignments[index])), abs=1e-9)


def test_enumeration_limit():
    with pytest.raises(DimensionError):
        all_assignments(21)


def test_dimension_error(two_tracks):
    with pytest.raises(DimensionError, match="dimension error"):
        build_qcbm(two_tracks).objective([0, 1])


def test_no_triplets_is_infeasible():
    instance = build_instance([[(0, 0)], [(0, 0)]])
    with pytest.raises(InfeasibleInstanceError, match="structurally infeasible instance"):
        build_qubm(instance)


def test_check_feasible_reports_violations(two_tracks):
    report = check_feasible(two_tracks, [0] * len(two_tracks.segments))
    assert not report.feasible
    assert report.violations == [0, 1, 2, 3, 4, 5]
    assert check_feasible(two_tracks, truth_assignment(two_tracks)).feasible
