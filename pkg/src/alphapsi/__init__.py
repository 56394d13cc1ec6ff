"""Coincidence and common fixed points of generalized alpha-psi contractive pairs.

Checks the hypotheses of the coincidence / common fixed point theorems for a
pair ``(f, g)`` (exhaustively on finite spaces, by sampling on the line),
runs the Jungck iteration with a Cauchy certificate, and cross-checks both
against an exhaustive oracle on random finite configurations.
"""
from ._checks import CheckResult, NonSummable, NotFinite, PointOutsideSpace, PreimageFailure
from .adapters import (
    CoefficientOutOfRange,
    CorollaryConfig,
    Reduction,
    alpha_from_cyclic,
    alpha_from_order,
    check_cyclic_conditions,
    check_g_nondecreasing,
    check_g_regular,
    reduce_corollary,
)
from .comparison import ComparisonFunction, check_psi_membership, psi_iterate, tail_bound
from .iterate import (
    InitialPointRejected,
    IterationTrace,
    Outcome,
    check_trace_invariants,
    jungck_iterate,
    verify_cauchy_certificate,
)
from .maps import IntervalSet, TableMap, identity_table, parse_map
from .oracle import (
    CoincidenceReport,
    Verdict,
    check_commuting_at_coincidence,
    check_condition_iii,
    check_uniqueness_hypothesis,
    enumerate_coincidence,
    falsification_search,
    run_theorem_suite,
)
from .pair import (
    AlphaFunction,
    BoxAlpha,
    ConstantAlpha,
    MappingPair,
    MatrixAlpha,
    ThresholdAlpha,
    check_alpha_admissible,
    check_alpha_admissible_wrt_g,
    check_contractive,
    check_g_range_closed,
    check_initial_point,
    check_range_inclusion,
    compute_M,
    sample_pairs,
)
from .scenario import ParseError, Scenario, build, load_scenario, parse_scenario
from .spaces import (
    CyclicPartition,
    FiniteSpace,
    IntervalSpace,
    PartialOrder,
    distance,
    line_space,
    random_finite_space,
    validate_space,
)

__version__ = "0.1.0"
