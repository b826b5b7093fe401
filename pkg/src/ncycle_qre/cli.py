"""Command-line entry point.

Subcommands: run, verify, rate-table, fig2, fig4, security-sweep, kcbs.
Exit codes: 0 success, 1 usage/config error, 2 protocol abort. All outputs
are deterministic for a fixed argv + seed; CSV files carry one leading
comment line recording the full parameter set.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import EstimationError, ValidationError
from .measurement import no_disturbance_residual, repeatability_statistic
from .protocol import ProtocolConfig, report_to_json, run_protocol
from .randomness import (
    expansion_rate,
    expected_input_length,
    expected_output_length,
)
from .scenarios import (
    CycleScenario,
    even_cycle_strategy,
    odd_cycle_strategy,
    quantum_bound,
    verify_strategy,
)
from .security import epsilon_to_delta, robustness_sweep

PAPER_EVEN_ASYMPTOTE = 0.9637  # published large-N target for the even-cycle rate curve
OMEGA_CONVENTIONS = ("marginal-derived", "paper-fig3", "paper-appd-text")


def _ideal_strategy(N: int, parity: str):
    return odd_cycle_strategy(N) if parity == "odd" else even_cycle_strategy(N)


def _write(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
        if not content.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(content, encoding="utf-8")


def _csv(params: dict, header: list[str], rows) -> str:
    comment = "# " + " ".join(f"{k}={v}" for k, v in params.items())
    lines = [comment, ",".join(header)]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    return "\n".join(lines) + "\n"


def even_omega0(N: int, convention: str) -> float:
    """Post-selection keep-weight for outcome 0 under a named convention.

    The published even-cycle protocol prints two mutually inconsistent
    formulas for this weight, and both disagree with the ideal strategy's
    actual uniform marginals (for which no reweighting is needed). All
    three are selectable; only marginal-derived yields uniform kept bits.
    """
    if convention == "marginal-derived":
        return 1.0
    if convention == "paper-fig3":
        return (1.0 + math.cos(math.pi / (2 * N))) / (3.0 - math.cos(math.pi / (2 * N)))
    if convention == "paper-appd-text":
        return (1.0 + math.cos(math.pi / N)) / (3.0 - math.cos(math.pi / N))
    raise ValidationError(f"unknown omega convention {convention!r}")


def cmd_run(args) -> int:
    doc = {}
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    for key, val in (
        ("n", args.n),
        ("N", args.N),
        ("parity", args.parity),
        ("q", args.q),
        ("epsilon", args.epsilon),
        ("seed", args.seed),
    ):
        if val is not None:
            doc[key] = val
    missing = [k for k in ("n", "N", "parity", "q", "epsilon", "seed") if k not in doc]
    if missing:
        raise ValidationError(f"missing config fields: {', '.join(missing)}")
    cfg = ProtocolConfig.from_dict(doc)
    strategy = _ideal_strategy(cfg.N, cfg.parity)
    report = run_protocol(cfg, strategy, collect_rounds=args.round_log is not None)
    _write(args.out, report_to_json(report))
    if args.round_log is not None:
        rows = []
        for rec in report.rounds:
            if rec.round_type == 0:
                kept = "01"[rec.gen_outcome] if rec.gen_kept else ""
                rows.append([rec.index, 0, "", "", rec.gen_outcome, "", kept])
            else:
                rows.append(
                    [rec.index, 1, rec.spot_i, rec.spot_lprime, rec.spot_a_first, rec.spot_a_second, ""]
                )
        _write(
            args.round_log,
            _csv(cfg.as_dict(), ["j", "T", "i", "l_prime", "a_i", "a_lprime", "k"], rows),
        )
    return 2 if report.aborted else 0


def cmd_verify(args) -> int:
    scenario = CycleScenario(N=args.N, parity=args.parity)
    strategy = _ideal_strategy(scenario.N, scenario.parity)
    report = verify_strategy(strategy)
    rng = np.random.default_rng(args.seed)
    r_stats = {
        str(i): repeatability_statistic(strategy, i, samples=args.samples, rng=rng)
        for i in range(1, scenario.N + 1)
    }
    doc = {
        "N": scenario.N,
        "parity": scenario.parity,
        "repeatability_R": r_stats,
        "no_disturbance_residual": no_disturbance_residual(strategy),
        "edge_orthogonality": report.edge_orthogonality,
        "commutation": report.commutation,
        "achieved_value": report.achieved_value,
        "quantum_bound": quantum_bound(scenario),
        "bound_gap": report.bound_gap,
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2))
    return 0


def cmd_rate_table(args) -> int:
    rows = []
    for N in args.N:
        CycleScenario(N=N, parity=args.parity)  # validate pairing
        for n in args.n:
            for q in args.q:
                r = expansion_rate(n, q, N, parity=args.parity)
                if args.parity == "odd":
                    c = math.cos(math.pi / N)
                    m = expected_output_length(n, q, N)
                    l_in = expected_input_length(n, q, N, 1.0 / (1.0 + c), c)
                else:
                    m = n * (1 - q)
                    l_in = expected_input_length(n, q, N, 0.5, 1.0)
                rows.append([n, N, float(q), float(m), float(l_in), float(r)])
    params = {"parity": args.parity}
    _write(args.out, _csv(params, ["n", "N", "q", "m", "l_in", "r"], rows))
    return 0


def cmd_fig2(args) -> int:
    rows = []
    for N in args.N:
        for n in args.n:
            q = 1.0 / math.sqrt(n)
            rows.append([n, N, float(q), float(expansion_rate(n, q, N, parity="odd"))])
    params = {"parity": "odd", "q": "1/sqrt(n)"}
    _write(args.out, _csv(params, ["n", "N", "q", "r"], rows))
    return 0


def cmd_fig4(args) -> int:
    n, q = args.n, args.q
    rows = []
    for N in range(4, args.N_max + 1, 2):
        w0 = even_omega0(N, args.omega_convention)
        r = expansion_rate(n, q, N, parity="even", omega0=w0, p0=0.5)
        rows.append([N, float(r)])
    params = {
        "parity": "even",
        "n": n,
        "q": q,
        "omega_convention": args.omega_convention,
        "paper_target_asymptote": PAPER_EVEN_ASYMPTOTE,
        "computed_at_N_max": rows[-1][1],
    }
    _write(args.out, _csv(params, ["N", "r"], rows))
    return 0


def cmd_security_sweep(args) -> int:
    eps_grid = np.geomspace(args.eps_min, args.eps_max, args.points)
    deltas = [epsilon_to_delta(args.N, e) for e in eps_grid]
    result = robustness_sweep(args.N, deltas, eve_model=args.eve_model)
    params = {
        "N": args.N,
        "eve_model": args.eve_model,
        "eps_min": args.eps_min,
        "eps_max": args.eps_max,
        "points": args.points,
    }
    out_csv = args.out or "sweep.csv"
    _write(out_csv, _csv(params, ["delta", "epsilon", "distance"], [list(r) for r in result.rows]))
    sidecar = {
        "slope": result.slope,
        "intercept": result.intercept,
        "r_squared": result.r_squared,
    }
    _write(str(Path(out_csv).with_suffix(".json")), json.dumps(sidecar, sort_keys=True, indent=2))
    return 0


def kcbs_analysis(beta_observed: float, n_rounds: int) -> dict:
    """Security budget implied by an observed 5-cycle inequality value.

    Reports the deficit to the quantum bound, the per-bit security cost
    (its square root), the largest key length before the security parameter
    reaches order one, and whether that cap leaves room for net expansion
    at the given number of rounds (q = 1/sqrt(n)).
    """
    bound = quantum_bound(CycleScenario(N=5, parity="odd"))
    if not 0.0 < beta_observed <= bound:
        raise ValidationError(f"beta must lie in (0, {bound}], got {beta_observed}")
    if n_rounds < 1:
        raise ValidationError(f"n_rounds must be >= 1, got {n_rounds}")
    epsilon = bound - beta_observed
    q = 1.0 / math.sqrt(n_rounds)
    c = math.cos(math.pi / 5)
    m_expected = expected_output_length(n_rounds, q, 5)
    l_in = expected_input_length(n_rounds, q, 5, 1.0 / (1.0 + c), c)
    if epsilon > 0:
        per_bit = math.sqrt(epsilon)
        max_m = math.floor(1.0 / per_bit)
        achievable = min(max_m, m_expected)
    else:
        per_bit = 0.0
        max_m = None
        achievable = m_expected
    return {
        "beta_observed": beta_observed,
        "quantum_bound": bound,
        "epsilon": epsilon,
        "per_bit_cost": per_bit,
        "max_secure_bits": max_m,
        "n_rounds": n_rounds,
        "q": q,
        "expected_output_bits": m_expected,
        "expected_input_bits": l_in,
        "expansion_achievable": bool(achievable > l_in),
    }


def cmd_kcbs(args) -> int:
    doc = kcbs_analysis(args.beta, args.n_rounds)
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1; 2 is reserved for protocol abort
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ncycle-qre",
        description="Simulate and verify cycle-contextuality randomness expansion",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute the protocol and write a report")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--parity", choices=("odd", "even"))
    p.add_argument("--q", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.add_argument("--round-log", help="optional per-round CSV audit log")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="assumption checks for an ideal strategy")
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rate-table", help="closed-form m, l_in and r over a grid")
    p.add_argument("--n", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    p.add_argument("--N", type=int, nargs="+", default=[5, 7, 9])
    p.add_argument("--q", type=float, nargs="+", default=[0.01])
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rate_table)

    p = sub.add_parser("fig2", help="odd-cycle rate vs rounds dataset (q = 1/sqrt(n))")
    p.add_argument("--n", type=int, nargs="+", default=[10**k for k in range(3, 8)])
    p.add_argument("--N", type=int, nargs="+", default=[5, 7, 9])
    p.add_argument("--out")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig4", help="even-cycle rate vs N dataset")
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--q", type=float, default=1e-3)
    p.add_argument("--N-max", type=int, default=100)
    p.add_argument("--omega-convention", choices=OMEGA_CONVENTIONS, default="marginal-derived")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("security-sweep", help="distance-vs-deficit scaling sweep")
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--eps-min", type=float, default=1e-6)
    p.add_argument("--eps-max", type=float, default=1e-2)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--eve-model", choices=("correlated", "product"), default="correlated")
    p.add_argument("--out", help="CSV path; sidecar JSON written next to it")
    p.set_defaults(func=cmd_security_sweep)

    p = sub.add_parser("kcbs", help="security budget for an observed 5-cycle value")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-rounds", type=int, default=10**4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kcbs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, EstimationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
