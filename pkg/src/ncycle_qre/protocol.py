"""Round-by-round execution of the cycle-inequality expansion protocol.

Each round is spot-check (probability q) or generation (probability 1-q).
Generation rounds measure label 1 on a freshly prepared state and keep the
outcome with probability omega[outcome] so that kept bits are uniform.
Spot-check rounds draw one uniform sample over the 2N (vertex, direction)
choices, measure the vertex and then its cyclic neighbor sequentially, and
feed the per-edge tallies into the inequality estimate that gates the
final bit string.

Accounted randomness comes from three carried-state interval streams over
one seeded BitSource (round-type selection, spot settings, post-selection);
measurement outcomes draw from a separate device RNG that models the
quantum devices' intrinsic randomness and is never charged to the ledger.
State is freshly prepared every round, so outcome distributions are fixed
per strategy and rounds are independent by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError, ValidationError
from .measurement import measure, outcome_probability, sequential_joint_prob
from .randomness import BitSource, IntervalStream, RandomnessLedger
from .scenarios import (
    CycleScenario,
    Strategy,
    cyclic_neighbor,
    inequality_terms,
    quantum_bound,
)
from .tolerances import PROB_ATOL

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ProtocolConfig:
    n: int
    N: int
    parity: str
    q: float
    epsilon: float
    seed: int
    omega_override: tuple[float, float] | None = None

    def __post_init__(self):
        CycleScenario(N=self.N, parity=self.parity)  # validates N/parity pairing
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.q <= 1.0:
            raise ValidationError(f"q must lie in [0,1], got {self.q}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must lie in (0,1), got {self.epsilon}")
        if self.omega_override is not None:
            w0, w1 = self.omega_override
            if not (0.0 < w0 <= 1.0 and 0.0 < w1 <= 1.0):
                raise ValidationError(f"omega weights must lie in (0,1], got {self.omega_override}")
            object.__setattr__(self, "omega_override", (float(w0), float(w1)))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "parity": self.parity,
            "q": self.q,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "omega_override": list(self.omega_override) if self.omega_override else None,
        }

    @staticmethod
    def from_dict(doc: dict) -> "ProtocolConfig":
        override = doc.get("omega_override")
        return ProtocolConfig(
            n=int(doc["n"]),
            N=int(doc["N"]),
            parity=str(doc["parity"]),
            q=float(doc["q"]),
            epsilon=float(doc["epsilon"]),
            seed=int(doc["seed"]),
            omega_override=tuple(override) if override else None,
        )


@dataclass(frozen=True)
class RoundRecord:
    index: int
    round_type: int                 # 0 generation, 1 spot-check
    gen_outcome: int | None = None
    gen_kept: bool | None = None
    spot_i: int | None = None
    spot_l: int | None = None
    spot_lprime: int | None = None
    spot_a_first: int | None = None
    spot_a_second: int | None = None

    def __post_init__(self):
        gen = self.gen_outcome is not None
        spot = self.spot_i is not None
        if gen == spot or gen != (self.round_type == 0):
            raise ValidationError("round record must populate exactly the branch matching its type")


class SpotCheckTally:
    """Ordered per-edge 2x2 outcome counts from spot-check rounds."""

    def __init__(self):
        self.counts: dict[tuple[int, int], list[list[int]]] = {}
        self.total = 0

    def add(self, first: int, second: int, a: int, b: int) -> None:
        table = self.counts.setdefault((first, second), [[0, 0], [0, 0]])
        table[a][b] += 1
        self.total += 1

    def pair_total(self, first: int, second: int) -> int:
        table = self.counts.get((first, second))
        return sum(sum(row) for row in table) if table else 0


@dataclass(frozen=True)
class ProtocolReport:
    config: ProtocolConfig
    bits: str                      # kept bits as '0'/'1' characters; empty when aborted
    beta_hat: float | None
    aborted: bool
    status: str                    # "ok" | "aborted" | "no-spot-coverage"
    ledger: RandomnessLedger
    m_observed: int
    r_observed: float
    spot_rounds: int
    source_bits_drawn: int
    rounds: tuple[RoundRecord, ...] | None = None


def post_selection_weights(s: Strategy) -> tuple[float, float]:
    """Keep-probabilities (w0, w1) making the kept bits exactly uniform.

    The more likely outcome is kept with probability p_less/p_more, the
    other always, so w0*p0 = w1*p1. For the ideal odd-cycle strategy this
    evaluates to (cos(pi/N), 1).
    """
    p1 = outcome_probability(s.rho, s.projector(1), 1)
    p0 = 1.0 - p1
    if p0 <= PROB_ATOL or p1 <= PROB_ATOL:
        raise ValidationError("degenerate marginal: uniform post-selection impossible")
    if p0 >= p1:
        return (p1 / p0, 1.0)
    return (1.0, p0 / p1)


def generation_round(
    s: Strategy,
    omega: tuple[float, float],
    post_stream: IntervalStream,
    ledger: RandomnessLedger,
    rng: np.random.Generator,
) -> int | None:
    """Measure label 1 on a fresh state; return the kept bit or None."""
    out = measure(s.rho, s.projector(1), rng.random())
    keep, used = post_stream.bernoulli(omega[out.outcome])
    ledger.consumed_post_selection += used
    if keep:
        ledger.produced_bits += 1
        return out.outcome
    return None


def spot_check_round(
    s: Strategy,
    spot_stream: IntervalStream,
    ledger: RandomnessLedger,
    rng: np.random.Generator,
    index: int = 0,
) -> RoundRecord:
    """Draw (vertex, direction) from one uniform-over-2N sample and measure the pair."""
    N = s.scenario.N
    draw, used = spot_stream.uniform(2 * N)
    ledger.consumed_spot_settings += used
    i = draw // 2 + 1
    l = draw % 2
    lprime = cyclic_neighbor(N, i, l)
    first = measure(s.rho, s.projector(i), rng.random())
    second = measure(first.post_state, s.projector(lprime), rng.random())
    return RoundRecord(
        index=index,
        round_type=1,
        spot_i=i,
        spot_l=l,
        spot_lprime=lprime,
        spot_a_first=first.outcome,
        spot_a_second=second.outcome,
    )


def estimate_inequality(tally: SpotCheckTally, scenario: CycleScenario) -> float:
    """Empirical inequality value from pooled per-edge spot-check counts.

    Both measurement orders of an edge are pooled (a sample of (j,i) counts
    toward (i,j) with outcomes transposed, justified by no-disturbance).
    Raises EstimationError naming the first edge with no samples.
    """
    value = 0.0
    for i, j in scenario.edges:
        fwd = tally.counts.get((i, j), [[0, 0], [0, 0]])
        rev = tally.counts.get((j, i), [[0, 0], [0, 0]])
        n_edge = sum(map(sum, fwd)) + sum(map(sum, rev))
        if n_edge == 0:
            raise EstimationError(f"no spot-check samples for edge ({i}, {j})")
        for fi, fj, a, b in inequality_terms(scenario):
            if (fi, fj) != (i, j):
                continue
            value += (fwd[a][b] + rev[b][a]) / n_edge
    return value


def abort_decision(beta_hat: float, scenario: CycleScenario, epsilon: float) -> bool:
    """Abort test against the quantum bound.

    Odd cycles abort when the bound exceeds the estimate by at least
    epsilon (one-sided: upward fluctuations never abort). Even cycles have
    no robust self-test, so the exact-maximum requirement is replaced by a
    two-sided tolerance of the same epsilon.
    """
    if not np.isfinite(beta_hat):
        raise ValidationError(f"inequality estimate must be finite, got {beta_hat!r}")
    gap = quantum_bound(scenario) - beta_hat
    if scenario.parity == "odd":
        return gap >= epsilon
    return abs(gap) >= epsilon


def _edge_distributions(s: Strategy) -> dict[tuple[int, int], np.ndarray]:
    """Cumulative joint-outcome distribution for every ordered spot pair."""
    N = s.scenario.N
    rho = s.rho
    tables = {}
    for i in range(1, N + 1):
        for l in (0, 1):
            lp = cyclic_neighbor(N, i, l)
            probs = [
                sequential_joint_prob(rho, s.projector(i), s.projector(lp), a, b, warn_noncommuting=False)
                for a in (0, 1)
                for b in (0, 1)
            ]
            tables[(i, lp)] = np.cumsum(probs)
    return tables


def run_protocol(
    cfg: ProtocolConfig, s: Strategy, collect_rounds: bool = False
) -> ProtocolReport:
    """Execute n rounds and assemble the report.

    Generation-round marginals and spot-pair joint distributions are fixed
    for a given strategy because every round starts from the same state, so
    they are computed once and sampled from directly; this is exactly the
    Born/projection-rule statistics of per-round sequential measurement.
    """
    if s.scenario.N != cfg.N or s.scenario.parity != cfg.parity:
        raise ValidationError(
            f"strategy scenario ({s.scenario.N},{s.scenario.parity}) does not match "
            f"config ({cfg.N},{cfg.parity})"
        )
    omega = cfg.omega_override or post_selection_weights(s)
    ledger = RandomnessLedger()
    src = BitSource(cfg.seed)
    t_stream = IntervalStream(src)
    spot_stream = IntervalStream(src)
    post_stream = IntervalStream(src)
    device_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed & _MASK64, 0xD1CE]))

    p1_gen = outcome_probability(s.rho, s.projector(1), 1)
    edge_cum = _edge_distributions(s)
    N = cfg.N
    tally = SpotCheckTally()
    bits: list[str] = []
    records: list[RoundRecord] = []
    spot_rounds = 0

    for j in range(1, cfg.n + 1):
        t_bit, used = t_stream.bernoulli(cfg.q)
        ledger.consumed_round_selection += used
        if t_bit == 0:
            a = 1 if device_rng.random() < p1_gen else 0
            keep, used = post_stream.bernoulli(omega[a])
            ledger.consumed_post_selection += used
            if keep:
                ledger.produced_bits += 1
                bits.append("01"[a])
            if collect_rounds:
                records.append(
                    RoundRecord(index=j, round_type=0, gen_outcome=a, gen_kept=bool(keep))
                )
        else:
            spot_rounds += 1
            draw, used = spot_stream.uniform(2 * N)
            ledger.consumed_spot_settings += used
            i = draw // 2 + 1
            l = draw % 2
            lp = cyclic_neighbor(N, i, l)
            u = device_rng.random()
            cum = edge_cum[(i, lp)]
            idx = int(np.searchsorted(cum, u, side="right"))
            idx = min(idx, 3)
            a, b = idx >> 1, idx & 1
            tally.add(i, lp, a, b)
            if collect_rounds:
                records.append(
                    RoundRecord(
                        index=j,
                        round_type=1,
                        spot_i=i,
                        spot_l=l,
                        spot_lprime=lp,
                        spot_a_first=a,
                        spot_a_second=b,
                    )
                )

    try:
        beta_hat = estimate_inequality(tally, s.scenario)
        aborted = abort_decision(beta_hat, s.scenario, cfg.epsilon)
        status = "aborted" if aborted else "ok"
    except EstimationError:
        beta_hat = None
        aborted = True
        status = "no-spot-coverage"

    bit_string = "" if aborted else "".join(bits)
    m_observed = len(bit_string)
    r_observed = (m_observed - ledger.total_consumed) / cfg.n
    return ProtocolReport(
        config=cfg,
        bits=bit_string,
        beta_hat=beta_hat,
        aborted=aborted,
        status=status,
        ledger=ledger,
        m_observed=m_observed,
        r_observed=r_observed,
        spot_rounds=spot_rounds,
        source_bits_drawn=src.bits_drawn,
        rounds=tuple(records) if collect_rounds else None,
    )


def bits_to_hex(bits: str) -> str:
    if not bits:
        return ""
    width = (len(bits) + 3) // 4
    return format(int(bits, 2), f"0{width}x")


def hex_to_bits(hexstr: str, length: int) -> str:
    if not hexstr:
        return ""
    return format(int(hexstr, 16), f"0{4 * len(hexstr)}b")[-length:] if length else ""


def report_to_json(report: ProtocolReport) -> str:
    doc = {
        "config": report.config.as_dict(),
        "beta_hat": report.beta_hat,
        "aborted": report.aborted,
        "status": report.status,
        "bits_hex": bits_to_hex(report.bits),
        "m_observed": report.m_observed,
        "r_observed": report.r_observed,
        "spot_rounds": report.spot_rounds,
        "source_bits_drawn": report.source_bits_drawn,
        "ledger": report.ledger.as_dict(rounds=report.config.n),
    }
    return json.dumps(doc, sort_keys=True, indent=2)
