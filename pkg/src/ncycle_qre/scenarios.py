"""N-cycle compatibility scenarios, their bounds, and optimal strategies.

A cycle scenario has N two-outcome measurements whose compatibility graph
is the cycle (1,2),(2,3),...,(N,1). Odd cycles carry the inequality

    sum_i p(1,0|i,i+1) <= (N-1)/2      (quantum max: N cos(pi/N)/(1+cos(pi/N)))

with indices wrapping N+1 -> 1. Even cycles carry the chained inequality

    sum_{i<N} [p(0,0|i,i+1) + p(1,1|i,i+1)] + p(0,1|N,1) + p(1,0|N,1)
        <= N-1                          (quantum max: (N/2)(1+cos(pi/N)))

Measurement labels are 1-based throughout; index arithmetic goes through
:func:`cyclic_neighbor` to avoid off-by-one mistakes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import (
    as_operator,
    commutator_norm,
    dagger,
    projector_from_vector,
    tensor,
    validate_pure_state,
)
from .tolerances import COMMUTE_ATOL, PROJECTOR_ATOL

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class CycleScenario:
    """Cycle compatibility graph on N measurement vertices."""

    N: int
    parity: str  # "odd" | "even"

    def __post_init__(self):
        if self.parity not in ("odd", "even"):
            raise ValidationError(f"parity must be 'odd' or 'even', got {self.parity!r}")
        if self.parity == "odd" and (self.N < 5 or self.N % 2 == 0):
            raise ValidationError(f"odd scenario needs odd N >= 5, got {self.N}")
        if self.parity == "even" and (self.N < 4 or self.N % 2 == 1):
            raise ValidationError(f"even scenario needs even N >= 4, got {self.N}")

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, i % self.N + 1) for i in range(1, self.N + 1))

    @property
    def exclusivity_order(self) -> int:
        # Number of vertices of the exclusivity graph of the inequality events.
        return self.N if self.parity == "odd" else 2 * self.N


def cyclic_neighbor(N: int, i: int, l: int) -> int:
    """Cyclic successor (l=0) or predecessor (l=1) of 1-based index i."""
    if not 1 <= i <= N:
        raise ValidationError(f"index {i} outside 1..{N}")
    if l not in (0, 1):
        raise ValidationError(f"direction bit must be 0 or 1, got {l}")
    step = 1 if l == 0 else -1
    return (i - 1 + step) % N + 1


@dataclass(frozen=True)
class Strategy:
    """A state plus N projective measurements on a cycle scenario.

    ``state`` is a normalized vector (the round state is its rank-1 density
    operator) and ``projectors[k]`` realizes measurement label k+1. Arrays
    are write-protected after construction: a strategy never changes
    between rounds.

    ``enforce_compatibility=False`` skips the edge-commutation check; it
    exists solely so assumption-check diagnostics can build deliberately
    broken fixtures.
    """

    scenario: CycleScenario
    state: np.ndarray
    projectors: tuple[np.ndarray, ...]
    enforce_compatibility: bool = True

    def __post_init__(self):
        state = validate_pure_state(self.state)
        state.setflags(write=False)
        object.__setattr__(self, "state", state)
        if len(self.projectors) != self.scenario.N:
            raise ValidationError(
                f"expected {self.scenario.N} projectors, got {len(self.projectors)}"
            )
        projs = []
        for k, p in enumerate(self.projectors):
            m = as_operator(p)
            if m.shape[0] != state.size:
                raise ValidationError(f"projector {k + 1} dim != state dim")
            if np.abs(m - dagger(m)).max() > PROJECTOR_ATOL:
                raise ValidationError(f"projector {k + 1} is not Hermitian")
            if np.abs(m @ m - m).max() > PROJECTOR_ATOL:
                raise ValidationError(f"projector {k + 1} is not idempotent")
            m.setflags(write=False)
            projs.append(m)
        object.__setattr__(self, "projectors", tuple(projs))
        if self.enforce_compatibility:
            for i, j in self.scenario.edges:
                res = commutator_norm(projs[i - 1], projs[j - 1])
                if res > COMMUTE_ATOL:
                    raise ValidationError(
                        f"projectors on edge ({i},{j}) do not commute (residual {res:.3e})"
                    )

    @property
    def dim(self) -> int:
        return int(self.state.size)

    @property
    def rho(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())

    def projector(self, label: int) -> np.ndarray:
        """Measurement projector for 1-based label."""
        if not 1 <= label <= self.scenario.N:
            raise ValidationError(f"label {label} outside 1..{self.scenario.N}")
        return self.projectors[label - 1]


def odd_cycle_strategy(N: int) -> Strategy:
    """Optimal qutrit strategy for the odd N-cycle inequality.

    The state is (1,0,0)^T and the measurement vectors are

        v_i = (cos t, sin t sin f_i, sin t cos f_i)^T,
        cos^2 t = cos(pi/N) / (1 + cos(pi/N)),   f_i = i*pi*(N-1)/N,

    which makes adjacent vectors exactly orthogonal, so edge projectors
    commute and the inequality value reaches N cos(pi/N)/(1+cos(pi/N)).
    """
    scenario = CycleScenario(N=int(N), parity="odd")
    N = scenario.N
    c = math.cos(math.pi / N)
    cos_t = math.sqrt(c / (1.0 + c))
    sin_t = math.sqrt(1.0 - c / (1.0 + c))
    state = np.zeros(3, dtype=complex)
    state[0] = 1.0
    projs = []
    for i in range(1, N + 1):
        phi = i * math.pi * (N - 1) / N
        v = np.array([cos_t, sin_t * math.sin(phi), sin_t * math.cos(phi)], dtype=complex)
        projs.append(projector_from_vector(v))
    return Strategy(scenario=scenario, state=state, projectors=tuple(projs))


def _bloch_projector(angle: float, conjugate: bool) -> np.ndarray:
    sign = -1.0 if conjugate else 1.0
    return 0.5 * (_I2 + math.cos(angle) * _PAULI_X + sign * math.sin(angle) * _PAULI_Y)


def even_cycle_strategy(N: int) -> Strategy:
    """Optimal two-qubit strategy for the even N-cycle inequality.

    The state is the maximally entangled pair (1,0,0,1)^T/sqrt(2).
    Measurement i uses the equatorial Bloch vector at angle i*pi/N, acting
    on qubit 1 for even i and on qubit 2 for odd i. Second-qubit
    measurements use the conjugated Bloch vector (sin component negated):
    with it the correlations depend on the angle difference between the two
    qubits' settings and every edge term reaches (1 + cos(pi/N))/2; with
    the un-conjugated vector the same construction evaluates to N/2, below
    even the non-contextual bound.
    """
    scenario = CycleScenario(N=int(N), parity="even")
    N = scenario.N
    state = np.zeros(4, dtype=complex)
    state[0] = state[3] = 1.0 / math.sqrt(2.0)
    projs = []
    for i in range(1, N + 1):
        angle = i * math.pi / N
        if i % 2 == 0:
            projs.append(tensor(_bloch_projector(angle, conjugate=False), _I2))
        else:
            projs.append(tensor(_I2, _bloch_projector(angle, conjugate=True)))
    return Strategy(scenario=scenario, state=state, projectors=tuple(projs))


def nchv_bound(scenario: CycleScenario) -> float:
    """Maximum inequality value over non-contextual hidden-variable models."""
    if scenario.parity == "odd":
        return (scenario.N - 1) / 2.0
    return float(scenario.N - 1)


def quantum_bound(scenario: CycleScenario) -> float:
    """Maximum inequality value over quantum strategies."""
    c = math.cos(math.pi / scenario.N)
    if scenario.parity == "odd":
        return scenario.N * c / (1.0 + c)
    return (scenario.N / 2.0) * (1.0 + c)


def inequality_terms(scenario: CycleScenario) -> tuple[tuple[int, int, int, int], ...]:
    """Terms (first, second, a, b) summed by the scenario's inequality."""
    N = scenario.N
    if scenario.parity == "odd":
        return tuple((i, i % N + 1, 1, 0) for i in range(1, N + 1))
    terms: list[tuple[int, int, int, int]] = []
    for i in range(1, N):
        terms.append((i, i + 1, 0, 0))
        terms.append((i, i + 1, 1, 1))
    terms.append((N, 1, 0, 1))
    terms.append((N, 1, 1, 0))
    return tuple(terms)


def inequality_value(
    scenario: CycleScenario, projectors, rho: np.ndarray
) -> float:
    """Analytic inequality value for arbitrary (possibly mixed) rho."""
    from .measurement import sequential_joint_prob

    total = 0.0
    for i, j, a, b in inequality_terms(scenario):
        total += sequential_joint_prob(
            rho, projectors[i - 1], projectors[j - 1], a, b, warn_noncommuting=False
        )
    return total


@dataclass(frozen=True)
class StrategyReport:
    edge_orthogonality: float  # max |tr(P_i P_j)| over edges (odd-cycle self-test precondition)
    commutation: float         # max commutator trace-norm over edges
    achieved_value: float      # analytic inequality value of the strategy
    bound_gap: float           # quantum bound minus achieved value


def verify_strategy(s: Strategy) -> StrategyReport:
    """Structural residuals and the analytically achieved inequality value."""
    edge_ortho = 0.0
    commutation = 0.0
    for i, j in s.scenario.edges:
        pi, pj = s.projectors[i - 1], s.projectors[j - 1]
        edge_ortho = max(edge_ortho, abs((pi @ pj).trace()))
        commutation = max(commutation, commutator_norm(pi, pj))
    achieved = inequality_value(s.scenario, s.projectors, s.rho)
    return StrategyReport(
        edge_orthogonality=float(edge_ortho),
        commutation=float(commutation),
        achieved_value=float(achieved),
        bound_gap=float(quantum_bound(s.scenario) - achieved),
    )


def _complex_pairs(arr: np.ndarray) -> list:
    flat = np.asarray(arr, dtype=complex)
    if flat.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in flat]
    return [_complex_pairs(row) for row in flat]


def _from_pairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def strategy_to_json(s: Strategy) -> str:
    """Serialize to the documented JSON schema (amplitudes as [re, im])."""
    doc = {
        "scenario": {"N": s.scenario.N, "parity": s.scenario.parity},
        "state": _complex_pairs(s.state),
        "projectors": [_complex_pairs(p) for p in s.projectors],
    }
    return json.dumps(doc, sort_keys=True)


def strategy_from_json(text: str) -> Strategy:
    doc = json.loads(text)
    scenario = CycleScenario(N=int(doc["scenario"]["N"]), parity=doc["scenario"]["parity"])
    state = _from_pairs(doc["state"])
    projectors = tuple(_from_pairs(p) for p in doc["projectors"])
    return Strategy(scenario=scenario, state=state, projectors=projectors)
