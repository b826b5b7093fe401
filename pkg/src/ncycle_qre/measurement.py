"""Projective measurement simulation and device-assumption checks.

Outcome 1 corresponds to the projector P, outcome 0 to 1-P. State update
follows the projection (Lueders) rule, which is the unique update making
repeated ideal measurements deterministic, so repeatability holds by
construction for projective inputs.

Sampling helpers draw from a caller-supplied RNG; that stream models the
measurement device's intrinsic randomness and is never charged against
the protocol's entropy ledger.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_operator, commutator_norm
from .scenarios import Strategy
from .tolerances import COMMUTE_ATOL, PROB_ATOL


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome: int               # 0 <-> 1-P, 1 <-> P
    post_state: np.ndarray
    probability: float


def _effect(proj: np.ndarray, a: int) -> np.ndarray:
    if a not in (0, 1):
        raise ValidationError(f"outcome must be 0 or 1, got {a}")
    return proj if a == 1 else np.eye(proj.shape[0], dtype=complex) - proj


def outcome_probability(rho: np.ndarray, proj: np.ndarray, a: int) -> float:
    """Born probability tr(P^a rho)."""
    rho = as_operator(rho)
    proj = as_operator(proj)
    if rho.shape != proj.shape:
        raise ValidationError(f"dim mismatch: state {rho.shape} vs projector {proj.shape}")
    p = float((_effect(proj, a) @ rho).trace().real)
    if p < -PROB_ATOL or p > 1.0 + PROB_ATOL:
        raise ValidationError(f"probability {p!r} outside [0,1]")
    return min(max(p, 0.0), 1.0)


def measure(rho: np.ndarray, proj: np.ndarray, u: float) -> MeasurementOutcome:
    """Sample one projective measurement using uniform draw ``u`` in [0,1).

    Outcome 1 is selected iff ``u`` < tr(P rho); the post-measurement state
    is P^a rho P^a / p(a).
    """
    if not 0.0 <= u < 1.0:
        raise ValidationError(f"uniform draw {u!r} outside [0,1)")
    p1 = outcome_probability(rho, proj, 1)
    a = 1 if u < p1 else 0
    p = p1 if a == 1 else 1.0 - p1
    eff = _effect(as_operator(proj), a)
    post = eff @ as_operator(rho) @ eff / p
    return MeasurementOutcome(outcome=a, post_state=post, probability=p)


def sequential_joint_prob(
    rho: np.ndarray,
    proj_first: np.ndarray,
    proj_second: np.ndarray,
    a: int,
    b: int,
    warn_noncommuting: bool = True,
) -> float:
    """p(a,b | first,second) = tr(Q^b P^a rho P^a) for sequential measurement.

    Order-independence is only guaranteed for commuting projectors; a
    warning is emitted otherwise.
    """
    rho = as_operator(rho)
    pf = as_operator(proj_first)
    ps = as_operator(proj_second)
    if warn_noncommuting and commutator_norm(pf, ps) > COMMUTE_ATOL:
        warnings.warn("sequential_joint_prob on non-commuting projectors", stacklevel=2)
    ea = _effect(pf, a)
    eb = _effect(ps, b)
    p = float((eb @ ea @ rho @ ea).trace().real)
    return min(max(p, 0.0), 1.0)


def repeatability_statistic(
    s: Strategy, i: int, samples: int, rng: np.random.Generator
) -> float:
    """Empirical R = p(0,0|i,i) + p(1,1|i,i) from repeated measurement."""
    if samples <= 0:
        raise ValidationError("samples must be positive")
    proj = s.projector(i)
    rho = s.rho
    agree = 0
    for _ in range(samples):
        first = measure(rho, proj, rng.random())
        second = measure(first.post_state, proj, rng.random())
        agree += first.outcome == second.outcome
    return agree / samples


def no_disturbance_residual(
    s: Strategy,
    analytic: bool = True,
    samples: int = 20000,
    rng: np.random.Generator | None = None,
) -> float:
    """Max over edges and outcomes of |p(a,b|i,j) - p(b,a|j,i)|.

    The analytic route evaluates the sequential joint probabilities
    exactly; the empirical route estimates them by sampling both orders.
    """
    rho = s.rho
    worst = 0.0
    for i, j in s.scenario.edges:
        pi, pj = s.projector(i), s.projector(j)
        if analytic:
            for a in (0, 1):
                for b in (0, 1):
                    fwd = sequential_joint_prob(rho, pi, pj, a, b, warn_noncommuting=False)
                    rev = sequential_joint_prob(rho, pj, pi, b, a, warn_noncommuting=False)
                    worst = max(worst, abs(fwd - rev))
        else:
            if rng is None:
                raise ValidationError("empirical mode requires an RNG")
            counts_fwd = np.zeros((2, 2))
            counts_rev = np.zeros((2, 2))
            for _ in range(samples):
                first = measure(rho, pi, rng.random())
                second = measure(first.post_state, pj, rng.random())
                counts_fwd[first.outcome, second.outcome] += 1
                first = measure(rho, pj, rng.random())
                second = measure(first.post_state, pi, rng.random())
                counts_rev[first.outcome, second.outcome] += 1
            diff = counts_fwd / samples - (counts_rev / samples).T
            worst = max(worst, float(np.abs(diff).max()))
    return worst
