"""Central table of numerical tolerances.

Every module pulls its thresholds from here so that acceptance-level
tuning happens in exactly one place.
"""

# State and operator validity
NORM_ATOL = 1e-12        # pure-state normalization, Hermiticity, trace-one
PSD_FLOOR = -1e-10       # most-negative admissible density-operator eigenvalue
CLAMP_FLOOR = 1e-12      # magnitude below which eigen/singular values clamp to zero

# Structural checks on strategies
PROJECTOR_ATOL = 1e-12   # idempotency and Hermiticity of projectors
COMMUTE_ATOL = 1e-10     # trace-norm of commutators on compatibility edges
EDGE_ORTHO_ATOL = 1e-12  # tr(P_i P_j) on odd-cycle edges

# Derived-quantity agreement
BOUND_ATOL = 1e-9        # analytic inequality value vs closed-form bound
PURIFY_ATOL = 1e-10      # partial-trace round trip of purifications
PROB_ATOL = 1e-12        # probability range / completeness slack

# Security computations
PRODUCT_EVE_ATOL = 1e-10  # distance threshold for uncorrelated-adversary checks
UNIFORM_WEIGHT_ATOL = 1e-6  # branch-weight uniformity required for key composition
