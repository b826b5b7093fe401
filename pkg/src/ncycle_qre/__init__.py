"""Cycle-contextuality randomness expansion: simulation and verification."""

from .errors import CapacityError, EstimationError, ValidationError
from .linalg import partial_trace, projector_from_vector, purify, tensor, trace_norm
from .measurement import (
    MeasurementOutcome,
    measure,
    no_disturbance_residual,
    outcome_probability,
    repeatability_statistic,
    sequential_joint_prob,
)
from .protocol import (
    ProtocolConfig,
    ProtocolReport,
    RoundRecord,
    SpotCheckTally,
    abort_decision,
    estimate_inequality,
    generation_round,
    post_selection_weights,
    report_to_json,
    run_protocol,
    spot_check_round,
)
from .randomness import (
    BitSource,
    IntervalStream,
    RandomnessLedger,
    binary_entropy,
    expansion_rate,
    expected_input_length,
    expected_output_length,
    interval_bernoulli,
    interval_uniform,
)
from .scenarios import (
    CycleScenario,
    Strategy,
    StrategyReport,
    cyclic_neighbor,
    even_cycle_strategy,
    inequality_terms,
    inequality_value,
    nchv_bound,
    odd_cycle_strategy,
    quantum_bound,
    strategy_from_json,
    strategy_to_json,
    verify_strategy,
)
from .security import (
    CqState,
    JointState,
    SecurityReport,
    SweepResult,
    adversarial_purification,
    correlated_purification,
    epsilon_to_delta,
    final_key_distance,
    perturbed_strategy,
    post_measurement_cq,
    post_selected_cq,
    robustness_sweep,
    single_round_security_distance,
    uniformizing_weights,
)

__version__ = "0.1.0"
