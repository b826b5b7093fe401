"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines inline. Criteria for the plot renderer live in the separate
``plots/`` package's own test suite.
"""

import math
import time

import numpy as np
import pytest

import ncycle_qre as nq
from ncycle_qre.cli import even_omega0, kcbs_analysis
from ncycle_qre.randomness import binary_entropy

from conftest import dense_key_distance

SQRT5 = 2.23606797749979
COS36 = 0.8090169943749475
P01_N5 = 0.5527864045000421
KEEP_FRACTION_5 = 2 * COS36 / (1 + COS36)
R_INF_5 = 0.5055290709462373


def ok(criterion: int, detail: str) -> None:
    print(f"PASS criterion {criterion:2d}: {detail}")


def test_criterion_01_quantum_bounds():
    start = time.time()
    s5 = nq.odd_cycle_strategy(5)
    achieved5 = nq.inequality_value(s5.scenario, s5.projectors, s5.rho)
    assert abs(achieved5 - SQRT5) <= 1e-9
    assert nq.quantum_bound(s5.scenario) == pytest.approx(SQRT5, abs=1e-9)
    assert nq.nchv_bound(s5.scenario) == 2.0

    s4 = nq.even_cycle_strategy(4)
    achieved4 = nq.inequality_value(s4.scenario, s4.projectors, s4.rho)
    assert abs(achieved4 - (2 + math.sqrt(2))) <= 1e-9
    assert nq.quantum_bound(s4.scenario) == pytest.approx(2 + math.sqrt(2), abs=1e-9)
    assert nq.nchv_bound(s4.scenario) == 3.0
    elapsed = time.time() - start
    assert elapsed < 1.0
    ok(1, f"beta_QT(C5)={achieved5:.10f}, gamma_QT(M8)={achieved4:.10f} in {elapsed:.2f}s")


def test_criterion_02_monte_carlo_estimate():
    start = time.time()
    s = nq.odd_cycle_strategy(5)
    stream = nq.IntervalStream(nq.BitSource(1001))
    ledger = nq.RandomnessLedger()
    rng = np.random.default_rng(1001)
    tally = nq.SpotCheckTally()
    n_spot = 100_000
    for _ in range(n_spot):
        rec = nq.spot_check_round(s, stream, ledger, rng)
        tally.add(rec.spot_i, rec.spot_lprime, rec.spot_a_first, rec.spot_a_second)
    beta_hat = nq.estimate_inequality(tally, s.scenario)
    # per-edge binomial sigma of the pooled (1,0) frequencies
    var = 0.0
    for i, j in s.scenario.edges:
        fwd = tally.counts.get((i, j), [[0, 0], [0, 0]])
        rev = tally.counts.get((j, i), [[0, 0], [0, 0]])
        n_e = sum(map(sum, fwd)) + sum(map(sum, rev))
        p_hat = (fwd[1][0] + rev[0][1]) / n_e
        var += p_hat * (1 - p_hat) / n_e
    sigma = math.sqrt(var)
    assert abs(beta_hat - SQRT5) <= 5 * sigma
    elapsed = time.time() - start
    assert elapsed < 10.0
    ok(2, f"beta_hat={beta_hat:.5f} vs sqrt5, |dev|={abs(beta_hat-SQRT5):.5f} <= 5sigma={5*sigma:.5f} in {elapsed:.1f}s")


def test_criterion_03_post_selection_uniformity():
    start = time.time()
    s = nq.odd_cycle_strategy(5)
    omega = nq.post_selection_weights(s)
    stream = nq.IntervalStream(nq.BitSource(2002))
    ledger = nq.RandomnessLedger()
    rng = np.random.default_rng(2002)
    n = 100_000
    kept = [nq.generation_round(s, omega, stream, ledger, rng) for _ in range(n)]
    bits = [k for k in kept if k is not None]
    frac = len(bits) / n
    sigma_frac = math.sqrt(KEEP_FRACTION_5 * (1 - KEEP_FRACTION_5) / n)
    assert abs(frac - KEEP_FRACTION_5) <= 5 * sigma_frac
    freq1 = sum(bits) / len(bits)
    sigma_bit = math.sqrt(0.25 / len(bits))
    assert abs(freq1 - 0.5) <= 5 * sigma_bit
    elapsed = time.time() - start
    assert elapsed < 10.0
    ok(3, f"kept fraction {frac:.4f} (target {KEEP_FRACTION_5:.4f}), ones {freq1:.4f} in {elapsed:.1f}s")


def test_criterion_04_ledger_vs_formulas():
    start = time.time()
    n, q, N = 10**6, 1e-2, 5
    cfg = nq.ProtocolConfig(n=n, N=N, parity="odd", q=q, epsilon=0.05, seed=424242)
    rep = nq.run_protocol(cfg, nq.odd_cycle_strategy(N))
    assert rep.status == "ok"
    assert rep.ledger.total_consumed == rep.source_bits_drawn  # exact conservation

    m_expected = nq.expected_output_length(n, q, N)
    keep = (1 - q) * KEEP_FRACTION_5
    sigma_m = math.sqrt(n * keep * (1 - keep))
    assert abs(rep.ledger.produced_bits - m_expected) <= 3 * sigma_m

    l_in = nq.expected_input_length(n, q, N, P01_N5, COS36)
    # total-consumption sigma: information-content fluctuation of the
    # round-type stream plus count fluctuations of the spot and
    # post-selection streams (delta method on the closed form).
    var_round = n * q * (1 - q) * (math.log2((1 - q) / q)) ** 2
    var_spot = n * q * (1 - q) * (math.log2(2 * N)) ** 2
    var_keep = COS36 * (1 - COS36) * (math.log2(COS36 / (1 - COS36))) ** 2
    n_dec = n * (1 - q) * P01_N5
    var_post = n_dec * var_keep + n * (1 - q) * P01_N5 * (1 - P01_N5) * binary_entropy(COS36) ** 2
    sigma_c = math.sqrt(var_round + var_spot + var_post)
    deviation = rep.ledger.total_consumed - l_in
    assert abs(deviation) <= 3 * sigma_c
    elapsed = time.time() - start
    assert elapsed < 60.0
    ok(4, f"produced dev {rep.ledger.produced_bits - m_expected:+.0f} (3sig {3*sigma_m:.0f}), "
          f"consumed dev {deviation:+.0f} (3sig {3*sigma_c:.0f}) in {elapsed:.1f}s")


def test_criterion_05_interval_consumption():
    start = time.time()
    details = []
    for q in (0.5, 0.3, 0.0316):
        src = nq.BitSource(3003)
        n = 10**6
        total = 0
        for _ in range(n):
            _, used = nq.interval_bernoulli(q, src)
            total += used
        mean = total / n
        assert mean <= binary_entropy(q) + 3
        details.append(f"q={q}: {mean:.3f}<= {binary_entropy(q) + 3:.3f}")
    elapsed = time.time() - start
    assert elapsed < 30.0
    ok(5, "; ".join(details) + f" in {elapsed:.1f}s")


def test_criterion_06_uncorrelated_adversary():
    s = nq.odd_cycle_strategy(5)
    rng = np.random.default_rng(606)
    embeddings = [None]
    for d_out in (4, 5):
        z = rng.normal(size=(d_out, 3)) + 1j * rng.normal(size=(d_out, 3))
        qmat, _ = np.linalg.qr(z)
        embeddings.append(qmat[:, :3])
    worst = 0.0
    for embed in embeddings:
        for d_e in (1, 2, 3):
            joint = nq.adversarial_purification(s, eve_dim=d_e, embed=embed)
            proj = s.projector(1)
            if embed is not None:
                proj = embed @ proj @ embed.conj().T
            cq = nq.post_measurement_cq(joint, proj)
            worst = max(worst, nq.single_round_security_distance(cq))
    assert worst <= 1e-10
    ok(6, f"max single-round distance over embeddings x d_E: {worst:.2e} <= 1e-10")


def test_criterion_07_sqrt_scaling():
    start = time.time()
    eps_grid = np.geomspace(1e-6, 1e-2, 25)
    deltas = [nq.epsilon_to_delta(5, e) for e in eps_grid]
    res = nq.robustness_sweep(5, deltas, eve_model="correlated")
    assert 0.4 <= res.slope <= 0.6
    assert res.r_squared >= 0.98
    elapsed = time.time() - start
    assert elapsed < 60.0
    ok(7, f"slope={res.slope:.4f} in [0.4,0.6], R^2={res.r_squared:.6f} in {elapsed:.1f}s")


def test_criterion_08_key_composition():
    s = nq.odd_cycle_strategy(5)
    joint = nq.correlated_purification(s, 0.05)
    cq = nq.post_measurement_cq(joint, s.projector(1))
    cq = nq.post_selected_cq(cq, nq.uniformizing_weights(cq))
    d1 = nq.single_round_security_distance(cq)
    for m in range(1, 7):
        dist = nq.final_key_distance([cq] * m).distance
        assert dist <= m * d1 + 1e-9
    oracle_devs = []
    for m in (1, 2, 3):
        fact = nq.final_key_distance([cq] * m).distance
        dense = dense_key_distance([cq] * m)
        oracle_devs.append(abs(fact - dense))
        assert abs(fact - dense) <= 1e-9
    ok(8, f"m<=6 linear bound holds (D1={d1:.4f}); dense-oracle max dev {max(oracle_devs):.2e}")


def test_criterion_09_fig2_rates():
    r_point = nq.expansion_rate(10**6, 1e-3, 5)
    assert r_point == pytest.approx(0.4902878560429426, abs=1e-9)
    # n -> infinity, q -> 0 limit
    r_limit = 2 * COS36 / (1 + COS36) - binary_entropy(COS36) / (1 + COS36)
    assert r_limit == pytest.approx(R_INF_5, abs=1e-12)
    assert abs(r_limit - 0.5055) <= 5e-4
    assert nq.expansion_rate(10**13, 0.0, 5) == pytest.approx(r_limit, abs=1e-6)
    for N in (5, 7, 9):
        rates = [nq.expansion_rate(n, 1 / math.sqrt(n), N) for n in (10**3, 10**4, 10**5, 10**6, 10**7)]
        assert all(a < b for a, b in zip(rates, rates[1:]))
    at_1e6 = [nq.expansion_rate(10**6, 1e-3, N) for N in (5, 7, 9)]
    assert at_1e6[0] < at_1e6[1] < at_1e6[2]
    ok(9, f"r(N=5,n=1e6)={r_point:.6f}, limit={r_limit:.6f}~0.5055, monotone in n and N")


def test_criterion_10_kcbs_budget():
    doc = kcbs_analysis(2.236, 10**4)
    assert 1e-5 <= doc["epsilon"] < 1e-4           # order 1e-5
    assert 1e-3 < doc["per_bit_cost"] < 1e-1        # order 1e-2
    assert 50 <= doc["max_secure_bits"] <= 200      # ~100 bits
    assert doc["expansion_achievable"] is False
    assert kcbs_analysis(2.0, 10**4)["max_secure_bits"] == 2
    unlimited = kcbs_analysis(SQRT5, 10**6)
    assert unlimited["max_secure_bits"] is None and unlimited["expansion_achievable"]
    ok(10, f"eps={doc['epsilon']:.2e}, per-bit={doc['per_bit_cost']:.2e}, "
           f"max m={doc['max_secure_bits']}, expansion={doc['expansion_achievable']}")


def test_criterion_11_fig4_rates():
    target = 0.9637  # published large-N figure; informational (conventions inconsistent)
    summary = []
    for convention in ("marginal-derived", "paper-fig3", "paper-appd-text"):
        rates = []
        for N in range(4, 101, 2):
            w0 = even_omega0(N, convention)
            rates.append(nq.expansion_rate(10**6, 1e-3, N, parity="even", omega0=w0, p0=0.5))
        if convention == "marginal-derived":
            assert all(a > b for a, b in zip(rates, rates[1:]))
            direction = "decreasing"
        else:
            assert all(a < b for a, b in zip(rates, rates[1:]))
            direction = "increasing"
        summary.append(f"{convention}: r(100)={rates[-1]:.4f} ({direction})")
    ok(11, f"target {target} (informational); " + "; ".join(summary))


def test_criterion_12_assumption_checks():
    rng = np.random.default_rng(1212)
    s5 = nq.odd_cycle_strategy(5)
    s4 = nq.even_cycle_strategy(4)
    for i in range(1, 6):
        assert nq.repeatability_statistic(s5, i, samples=300, rng=rng) == 1.0
    nd5 = nq.no_disturbance_residual(s5)
    nd4 = nq.no_disturbance_residual(s4)
    assert nd5 <= 1e-12 and nd4 <= 1e-12

    v = math.cos(0.4) * np.array([1, 0, 0], dtype=complex) + math.sin(0.4) * np.array(
        [0, 1, 0], dtype=complex
    )
    projs = list(s5.projectors)
    projs[1] = np.outer(v, v.conj())
    corrupted = nq.Strategy(
        scenario=s5.scenario, state=s5.state, projectors=tuple(projs), enforce_compatibility=False
    )
    residual = nq.no_disturbance_residual(corrupted)
    assert residual > 1e-2
    ok(12, f"R=1 exactly; residuals odd {nd5:.1e}, even {nd4:.1e}; corrupted {residual:.3f} > 1e-2")
