"""Numerical verification of the trace-distance security statements.

The workflow mirrors the security analysis: purify the round state against
an adversary register, measure on the system side to obtain a
classical-quantum state, and quantify how far the adversary's conditional
states are from her unconditional marginal. Multi-round composition
tensors post-selected single-round cq states and evaluates the distance to
the ideal uniform-key product exactly, per classical label.

Distances use the adversary's unconditional marginal as the reference
state; among the natural choices it minimizes the reported distance, so
results are conservative.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .linalg import (
    as_operator,
    partial_trace,
    purify,
    tensor_all,
    trace_norm,
    validate_pure_state,
)
from .scenarios import (
    Strategy,
    inequality_value,
    odd_cycle_strategy,
    quantum_bound,
)
from .tolerances import CLAMP_FLOOR, NORM_ATOL, UNIFORM_WEIGHT_ATOL

_FINAL_KEY_MAX_ROUNDS = 8


@dataclass(frozen=True)
class JointState:
    """Pure state on system (x) adversary with explicit factor dimensions."""

    psi: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        psi = validate_pure_state(self.psi)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        d_a, d_e = self.dims
        if d_a * d_e != psi.size:
            raise ValidationError(f"dims {self.dims} inconsistent with amplitude length {psi.size}")


@dataclass(frozen=True)
class CqState:
    """Classical-quantum state: (label, weight, adversary conditional) branches."""

    branches: tuple[tuple[str, float, np.ndarray], ...]

    def __post_init__(self):
        total = sum(w for _, w, _ in self.branches)
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"branch weights sum to {total!r}, expected 1")
        for label, w, rho in self.branches:
            if w < 0:
                raise ValidationError(f"branch {label!r} has negative weight {w!r}")

    @property
    def eve_marginal(self) -> np.ndarray:
        return sum(w * rho for _, w, rho in self.branches)

    def weight(self, label: str) -> float:
        for lab, w, _ in self.branches:
            if lab == label:
                return w
        raise ValidationError(f"no branch labeled {label!r}")


@dataclass(frozen=True)
class SecurityReport:
    distance: float
    m: int
    epsilon_sec: float
    epsilon: float | None = None
    slope: float | None = None


@dataclass(frozen=True)
class SweepResult:
    """Log-log scaling of security distance against inequality deficit."""

    N: int
    eve_model: str
    rows: tuple[tuple[float, float, float], ...]  # (delta, epsilon, distance)
    slope: float
    intercept: float
    r_squared: float


def adversarial_purification(
    s: Strategy, eve_dim: int, embed: np.ndarray | None = None
) -> JointState:
    """Purify the (optionally isometrically embedded) round state against Eve.

    ``embed`` is an isometry V with V^dag V = 1 applied to the system
    factor before purification; identity by default.
    """
    rho = s.rho
    if embed is not None:
        v = np.asarray(embed, dtype=complex)
        if v.ndim != 2 or v.shape[1] != rho.shape[0]:
            raise ValidationError(f"isometry shape {v.shape} incompatible with system dim {rho.shape[0]}")
        if not np.all(np.isfinite(v.view(float))):
            raise ValidationError("isometry entries must be finite")
        if np.abs(v.conj().T @ v - np.eye(v.shape[1])).max() > NORM_ATOL:
            raise ValidationError("embed map is not an isometry")
        rho = v @ rho @ v.conj().T
    psi = purify(rho, eve_dim)
    return JointState(psi=psi, dims=(rho.shape[0], int(eve_dim)))


def post_measurement_cq(joint: JointState, proj: np.ndarray) -> CqState:
    """Measure ``proj`` on the system factor; return the resulting cq state.

    Branch a has weight p(a) and adversary conditional
    tr_A[(P^a (x) 1) |psi><psi| (P^a (x) 1)] / p(a); zero-probability
    branches are dropped.
    """
    d_a, d_e = joint.dims
    p_mat = as_operator(proj)
    if p_mat.shape[0] != d_a:
        raise ValidationError(f"projector dim {p_mat.shape[0]} != system dim {d_a}")
    amp = joint.psi.reshape(d_a, d_e)
    branches = []
    for a in (0, 1):
        eff = p_mat if a == 1 else np.eye(d_a, dtype=complex) - p_mat
        comp = eff @ amp
        weight = float(np.vdot(comp, comp).real)
        if weight <= CLAMP_FLOOR:
            continue
        eve = comp.T @ comp.conj() / weight
        branches.append((str(a), weight, eve))
    return CqState(branches=tuple(branches))


def post_selected_cq(cq: CqState, omega: tuple[float, float]) -> CqState:
    """Reweight branches by keep-probabilities and renormalize."""
    reweighted = []
    for label, w, rho in cq.branches:
        reweighted.append((label, omega[int(label)] * w, rho))
    total = sum(w for _, w, _ in reweighted)
    if total <= 0:
        raise ValidationError("post-selection removed all probability mass")
    return CqState(branches=tuple((lab, w / total, rho) for lab, w, rho in reweighted))


def uniformizing_weights(cq: CqState) -> tuple[float, float]:
    """Keep-probabilities that make a two-branch cq state exactly uniform."""
    p0 = cq.weight("0")
    p1 = cq.weight("1")
    if p0 <= 0 or p1 <= 0:
        raise ValidationError("degenerate branch weights")
    if p0 >= p1:
        return (p1 / p0, 1.0)
    return (1.0, p0 / p1)


def single_round_security_distance(cq: CqState) -> float:
    """Trace distance between the cq state and its uncorrelated counterpart.

    Block-diagonality in the classical register lets the norm decompose per
    branch: D = sum_a p(a) ||rho_E^a - rho_E||_1 with rho_E the marginal.
    """
    marginal = cq.eve_marginal
    return float(sum(w * trace_norm(rho - marginal) for _, w, rho in cq.branches))


def _iid_branch_lookup(rounds) -> list[dict[str, tuple[float, np.ndarray]]]:
    lookup = []
    for cq in rounds:
        entry = {label: (w, rho) for label, w, rho in cq.branches}
        if set(entry) != {"0", "1"}:
            raise ValidationError("key composition requires two-branch cq states labeled '0'/'1'")
        lookup.append(entry)
    return lookup


def final_key_distance(rounds) -> SecurityReport:
    """Exact distance of the m-round key cq state from the uniform ideal.

    Rounds must be post-selected (branch weights 1/2 within tolerance).
    The key register is block-diagonal, so the norm is the sum over the
    2^m classical labels of per-label trace norms on the adversary space.
    Refuses m > 8; the label space grows exponentially.
    """
    m = len(rounds)
    if m == 0:
        raise ValidationError("need at least one round")
    if m > _FINAL_KEY_MAX_ROUNDS:
        raise CapacityError(f"exact key-distance computation capped at m={_FINAL_KEY_MAX_ROUNDS}, got {m}")
    lookup = _iid_branch_lookup(rounds)
    for entry in lookup:
        for label in ("0", "1"):
            if abs(entry[label][0] - 0.5) > UNIFORM_WEIGHT_ATOL:
                raise ValidationError(
                    f"branch weight {entry[label][0]!r} deviates from 1/2; post-select first"
                )
    marginals = [cq.eve_marginal for cq in rounds]
    ideal_weight = 2.0 ** -m
    total = 0.0
    for label in itertools.product("01", repeat=m):
        weight = 1.0
        conds = []
        for entry, k in zip(lookup, label):
            w, rho = entry[k]
            weight *= w
            conds.append(rho)
        block = weight * tensor_all(conds) - ideal_weight * tensor_all(marginals)
        total += trace_norm(block)
    return SecurityReport(distance=float(total), m=m, epsilon_sec=float(total))


def perturbed_strategy(s: Strategy, delta: float, mode: str) -> Strategy:
    """Rotate the state or all measurement vectors by ``delta`` radians.

    state-rotation tilts the prepared state inside the span of itself and a
    fixed orthogonal direction; measurement-rotation applies one common
    rotation to every projector (structure is preserved in both modes, the
    achieved inequality value drops quadratically in delta).
    """
    if abs(delta) > 0.5:
        raise ValidationError(f"perturbation angle {delta!r} exceeds 0.5 rad")
    if mode == "state-rotation":
        state = _rotated_vector(s.state, delta)
        return Strategy(scenario=s.scenario, state=state, projectors=s.projectors)
    if mode == "measurement-rotation":
        rot = _plane_rotation(s.dim, delta)
        projs = tuple(rot @ p @ rot.conj().T for p in s.projectors)
        return Strategy(scenario=s.scenario, state=s.state, projectors=projs)
    raise ValidationError(f"unknown perturbation mode {mode!r}")


def _orthogonal_direction(state: np.ndarray) -> np.ndarray:
    for k in range(state.size):
        basis = np.zeros(state.size, dtype=complex)
        basis[k] = 1.0
        residual = basis - np.vdot(state, basis) * state
        norm = np.linalg.norm(residual)
        if norm > 1e-6:
            return residual / norm
    raise ValidationError("no orthogonal direction found")


def _rotated_vector(state: np.ndarray, delta: float) -> np.ndarray:
    direction = _orthogonal_direction(state)
    return math.cos(delta) * state + math.sin(delta) * direction


def _plane_rotation(dim: int, delta: float) -> np.ndarray:
    rot = np.eye(dim, dtype=complex)
    rot[0, 0] = math.cos(delta)
    rot[0, 1] = -math.sin(delta)
    rot[1, 0] = math.sin(delta)
    rot[1, 1] = math.cos(delta)
    return rot


def correlated_purification(s: Strategy, delta: float) -> JointState:
    """Joint state whose perturbation direction is entangled with Eve.

    cos(d)|v0>|e0> + sin(d)|v_perp>|e1>: the system marginal is the
    delta-mixed state (achieving the quantum bound minus O(delta^2)) while
    Eve's conditional states acquire O(delta) coherences, the worst-case
    family for the square-root scaling check.
    """
    direction = _orthogonal_direction(s.state)
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    psi = math.cos(delta) * np.kron(s.state, e0) + math.sin(delta) * np.kron(direction, e1)
    return JointState(psi=psi, dims=(s.dim, 2))


def epsilon_to_delta(N: int, epsilon: float) -> float:
    """Perturbation angle that produces inequality deficit ``epsilon``.

    For the state-rotation/correlated family the deficit is
    K sin^2(delta) with K = bound - N / (2 (1 + cos(pi/N))).
    """
    coeff = quantum_bound_coefficient(N)
    if not 0.0 <= epsilon <= coeff:
        raise ValidationError(f"epsilon {epsilon!r} outside [0, {coeff}]")
    return math.asin(math.sqrt(epsilon / coeff))


def quantum_bound_coefficient(N: int) -> float:
    c = math.cos(math.pi / N)
    return N * c / (1.0 + c) - N / (2.0 * (1.0 + c))


def _loglog_fit(xs, ys) -> tuple[float, float, float]:
    lx = np.log(np.asarray(xs))
    ly = np.log(np.asarray(ys))
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r_squared


def robustness_sweep(N: int, deltas, eve_model: str = "correlated") -> SweepResult:
    """Scan perturbation angles; fit log(distance) against log(deficit).

    The correlated model entangles Eve with the perturbation; the product
    model purifies the rotated state against an uncorrelated register, for
    which the distance stays at numerical zero regardless of the deficit.
    """
    if eve_model not in ("correlated", "product"):
        raise ValidationError(f"unknown eve model {eve_model!r}")
    deltas = [float(d) for d in deltas]
    if len(deltas) < 2:
        raise ValidationError("need at least two grid points")
    s = odd_cycle_strategy(N)
    bound = quantum_bound(s.scenario)
    rows = []
    for delta in deltas:
        if eve_model == "correlated":
            joint = correlated_purification(s, delta)
            rho_a = partial_trace(np.outer(joint.psi, joint.psi.conj()), list(joint.dims), [0])
        else:
            tilted = perturbed_strategy(s, delta, "state-rotation")
            joint = adversarial_purification(tilted, eve_dim=1)
            rho_a = tilted.rho
        epsilon = bound - inequality_value(s.scenario, s.projectors, rho_a)
        cq = post_measurement_cq(joint, s.projector(1))
        distance = single_round_security_distance(cq)
        rows.append((delta, float(epsilon), distance))
    fit_rows = [(e, d) for _, e, d in rows if e > 0 and d > 0]
    if eve_model == "correlated":
        if len(fit_rows) < 2:
            raise ValidationError("degenerate grid: not enough positive (epsilon, distance) pairs")
        slope, intercept, r_squared = _loglog_fit(
            [e for e, _ in fit_rows], [d for _, d in fit_rows]
        )
    else:
        slope, intercept, r_squared = float("nan"), float("nan"), float("nan")
    return SweepResult(
        N=int(N),
        eve_model=eve_model,
        rows=tuple(rows),
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
    )
