"""
Constrained, penalty and linearized models over the segment variables.

Variable s is x_{i,j} for the s-th candidate segment (i, j) of the instance.
Receive constraints cover hits on layers 2..L, send constraints hits on layers
1..L-1; both require exactly one selected segment.
"""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from trackfind.errors import DimensionError, InfeasibleInstanceError, ModelBuildError
from trackfind.models import FeasibilityReport, Instance

logger = logging.getLogger(__name__)

# Largest model enumerate_qubo will expand (2^20 assignments)
MAX_ENUMERATION_VARS = 20


class ConstrainedModel(BaseModel):
    """Quadratic objective with exactly-one degree constraints"""

    model_config = ConfigDict(frozen=True)

    num_vars: int
    alpha: float
    quadratic: list[tuple[int, int, float]] = Field(..., description="(var_a, var_b, alpha x cost) per triplet")
    receive: dict[int, list[int]] = Field(..., description="Hit -> incoming segment variables")
    send: dict[int, list[int]] = Field(..., description="Hit -> outgoing segment variables")

    def objective(self, assignment: list[int]) -> float:
        _check_length(assignment, self.num_vars)
        return sum(coef for a, b, coef in self.quadratic if assignment[a] and assignment[b])

    def is_feasible(self, assignment: list[int]) -> bool:
        _check_length(assignment, self.num_vars)
        groups = list(self.receive.values()) + list(self.send.values())
        return all(sum(assignment[v] for v in group) == 1 for group in groups)


class QuboModel(BaseModel):
    """Penalty Hamiltonian as offset + linear + upper-triangular quadratic terms"""

    model_config = ConfigDict(frozen=True)

    num_vars: int
    linear: list[float]
    quadratic: dict[tuple[int, int], float] = Field(..., description="Canonical (a < b) pair coefficients")
    offset: float
    alpha: float
    gamma: float
    variables: list[tuple[int, int]] = Field(default_factory=list, description="Segment endpoints per variable")
    cost_terms: list[tuple[int, int, float]] = Field(default_factory=list)
    receive: dict[int, list[int]] = Field(default_factory=dict)
    send: dict[int, list[int]] = Field(default_factory=dict)

    def energy(self, assignment: list[int]) -> float:
        return qubo_energy(self, assignment)

    def cost(self, assignment: list[int]) -> float:
        """alpha-weighted track cost part of the energy"""
        _check_length(assignment, self.num_vars)
        return sum(coef for a, b, coef in self.cost_terms if assignment[a] and assignment[b])

    def penalty(self, assignment: list[int]) -> float:
        """gamma-weighted constraint violation part, zero iff feasible"""
        _check_length(assignment, self.num_vars)
        groups = list(self.receive.values()) + list(self.send.values())
        return self.gamma * sum((1 - sum(assignment[v] for v in group)) ** 2 for group in groups)

    def is_feasible(self, assignment: list[int]) -> bool:
        _check_length(assignment, self.num_vars)
        groups = list(self.receive.values()) + list(self.send.values())
        return all(sum(assignment[v] for v in group) == 1 for group in groups)

    def to_numpy(self) -> tuple[np.ndarray, np.ndarray]:
        """Linear vector and strictly upper-triangular coupling matrix"""
        linear = np.asarray(self.linear, dtype=np.float64)
        coupling = np.zeros((self.num_vars, self.num_vars), dtype=np.float64)
        for (a, b), coef in self.quadratic.items():
            coupling[a, b] = coef
        return linear, coupling


class LinearRow(BaseModel):
    """One linear constraint sum(coef x var) <sense> rhs"""

    model_config = ConfigDict(frozen=True)

    name: str
    coefficients: dict[int, int]
    sense: Literal["<=", "=="]
    rhs: float


class LinearModel(BaseModel):
    """
    Binary linear program with product variables z = x_a * x_b.

    Variables 0..num_x-1 are segment variables, num_x..num_x+num_z-1 the
    product variables, one per triplet.
    """

    model_config = ConfigDict(frozen=True)

    num_x: int
    num_z: int
    alpha: float
    z_pairs: list[tuple[int, int]] = Field(..., description="(var_a, var_b) multiplied by each z")
    objective: list[float] = Field(..., description="alpha x cost coefficient per z")
    rows: list[LinearRow]

    def product_z(self, x: list[int]) -> list[int]:
        _check_length(x, self.num_x)
        return [x[a] * x[b] for a, b in self.z_pairs]

    def objective_value(self, x: list[int], z: list[int]) -> float:
        _check_length(x, self.num_x)
        _check_length(z, self.num_z)
        return sum(coef * value for coef, value in zip(self.objective, z) if value)

    def satisfies(self, x: list[int], z: list[int]) -> bool:
        values = list(x) + list(z)
        _check_length(values, self.num_x + self.num_z)
        for row in self.rows:
            lhs = sum(coef * values[var] for var, coef in row.coefficients.items())
            if row.sense == "==" and lhs != row.rhs:
                return False
            if row.sense == "<=" and lhs > row.rhs:
                return False
        return True


def _check_length(assignment: list[int], expected: int) -> None:
    if len(assignment) != expected:
        raise DimensionError(f"dimension error: assignment has {len(assignment)} entries, expected {expected}")


def _constraint_groups(instance: Instance) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Receive and send variable sets, failing when one is empty"""
    if not instance.triplets:
        raise InfeasibleInstanceError("structurally infeasible instance: no triplets")

    receive = {h: list(instance.in_segments[h]) for h in instance.receive_hits}
    send = {h: list(instance.out_segments[h]) for h in instance.send_hits}

    empty_receive = [h for h, group in receive.items() if not group]
    empty_send = [h for h, group in send.items() if not group]
    if empty_receive or empty_send:
        raise InfeasibleInstanceError(
            f"structurally infeasible instance: hits without incoming candidates {empty_receive[:5]}, "
            f"without outgoing candidates {empty_send[:5]}"
        )
    return receive, send


def _cost_terms(instance: Instance, alpha: float) -> list[tuple[int, int, float]]:
    index = instance.segment_index
    terms = []
    seen: set[tuple[int, int]] = set()
    for triplet in instance.triplets:
        a = index[(triplet.i, triplet.j)]
        b = index[(triplet.j, triplet.k)]
        if (a, b) in seen:
            raise ModelBuildError(f"triplet ({triplet.i}, {triplet.j}, {triplet.k}) repeats variable pair ({a}, {b})")
        seen.add((a, b))
        terms.append((a, b, alpha * triplet.cost))
    return terms


def build_qcbm(instance: Instance, alpha: float = 100.0) -> ConstrainedModel:
    """Quadratic objective alpha x sum(c x x) with exactly-one degree constraints"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    receive, send = _constraint_groups(instance)
    model = ConstrainedModel(
        num_vars=len(instance.segments),
        alpha=alpha,
        quadratic=_cost_terms(instance, alpha),
        receive=receive,
        send=send,
    )
    logger.debug(f"Built QCBM: {model.num_vars} variables, {len(model.quadratic)} terms")
    return model


def build_qubm(instance: Instance, alpha: float = 100.0, gamma: float = 1.0) -> QuboModel:
    """
    Penalty Hamiltonian

        H = alpha x sum(c x x) + gamma x sum_j (1 - sum_i x_ij)^2 + gamma x sum_i (1 - sum_j x_ij)^2

    Each square expands (with x^2 = x) to 1 - sum x + 2 sum_{s<t} x_s x_t.
    """
    if alpha <= 0 or gamma <= 0:
        raise ValueError("alpha and gamma must be positive")
    receive, send = _constraint_groups(instance)
    cost_terms = _cost_terms(instance, alpha)

    num_vars = len(instance.segments)
    linear = [0.0] * num_vars
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0

    for a, b, coef in cost_terms:
        key = (a, b) if a < b else (b, a)
        quadratic[key] = quadratic.get(key, 0.0) + coef

    for group in list(receive.values()) + list(send.values()):
        offset += gamma
        for position, s in enumerate(group):
            linear[s] -= gamma
            for t in group[position + 1 :]:
                key = (s, t) if s < t else (t, s)
                quadratic[key] = quadratic.get(key, 0.0) + 2.0 * gamma

    model = QuboModel(
        num_vars=num_vars,
        linear=linear,
        quadratic=dict(sorted(quadratic.items())),
        offset=offset,
        alpha=alpha,
        gamma=gamma,
        variables=[(s.source, s.target) for s in instance.segments],
        cost_terms=cost_terms,
        receive=receive,
        send=send,
    )
    logger.debug(f"Built QUBM: {num_vars} variables, {len(model.quadratic)} couplings, offset {offset}")
    return model


def qubo_energy(model: QuboModel, assignment: list[int]) -> float:
    """offset + sum of linear and quadratic coefficients over set bits"""
    _check_length(assignment, model.num_vars)
    energy = model.offset
    for var, coef in enumerate(model.linear):
        if assignment[var]:
            energy += coef
    for (a, b), coef in model.quadratic.items():
        if assignment[a] and assignment[b]:
            energy += coef
    return energy


def build_blp(instance: Instance, alpha: float = 100.0) -> LinearModel:
    """Linear program with one product variable per triplet and the Glover rows"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    receive, send = _constraint_groups(instance)
    cost_terms = _cost_terms(instance, alpha)
    num_x = len(instance.segments)

    rows: list[LinearRow] = []
    for hit, group in receive.items():
        rows.append(LinearRow(name=f"receive_{hit}", coefficients={v: 1 for v in group}, sense="==", rhs=1))
    for hit, group in send.items():
        rows.append(LinearRow(name=f"send_{hit}", coefficients={v: 1 for v in group}, sense="==", rhs=1))

    for t, (a, b, _) in enumerate(cost_terms):
        z = num_x + t
        rows.extend(
            [
                LinearRow(name=f"link_{t}", coefficients={a: 1, b: 1, z: -1}, sense="<=", rhs=1),
                LinearRow(name=f"upper_first_{t}", coefficients={z: 1, a: -1}, sense="<=", rhs=0),
                LinearRow(name=f"upper_second_{t}", coefficients={z: 1, b: -1}, sense="<=", rhs=0),
                LinearRow(name=f"z_lower_{t}", coefficients={z: -1}, sense="<=", rhs=0),
                LinearRow(name=f"z_upper_{t}", coefficients={z: 1}, sense="<=", rhs=1),
            ]
        )

    return LinearModel(
        num_x=num_x,
        num_z=len(cost_terms),
        alpha=alpha,
        z_pairs=[(a, b) for a, b, _ in cost_terms],
        objective=[coef for _, _, coef in cost_terms],
        rows=rows,
    )


def check_feasible(instance: Instance, assignment: list[int]) -> FeasibilityReport:
    """Degree report; feasible iff every mandatory degree equals 1"""
    _check_length(assignment, len(instance.segments))
    in_degree = [0] * len(instance.hits)
    out_degree = [0] * len(instance.hits)
    for ordinal, bit in enumerate(assignment):
        if bit:
            segment = instance.segments[ordinal]
            out_degree[segment.source] += 1
            in_degree[segment.target] += 1

    last = instance.num_layers
    violations = [
        hit.id
        for hit in instance.hits
        if (hit.layer >= 2 and in_degree[hit.id] != 1) or (hit.layer < last and out_degree[hit.id] != 1)
    ]
    return FeasibilityReport(
        in_degree=in_degree,
        out_degree=out_degree,
        violations=violations,
        feasible=not violations,
    )


def all_assignments(num_vars: int) -> np.ndarray:
    """Every bit-vector of length num_vars as rows of a 0/1 matrix"""
    if num_vars > MAX_ENUMERATION_VARS:
        raise DimensionError(f"refusing to enumerate {num_vars} variables (limit {MAX_ENUMERATION_VARS})")
    codes = np.arange(2**num_vars, dtype=np.int64)
    return ((codes[:, None] >> np.arange(num_vars)) & 1).astype(np.int8)


def enumerate_qubo(model: QuboModel) -> tuple[np.ndarray, np.ndarray]:
    """All assignments and their energies, vectorised"""
    assignments = all_assignments(model.num_vars)
    linear, coupling = model.to_numpy()
    x = assignments.astype(np.float64)
    energies = model.offset + x @ linear + np.einsum("ni,ij,nj->n", x, coupling, x)
    return assignments, energies
