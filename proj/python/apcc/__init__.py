"""Privacy-preserving coded computing with hierarchical task partitioning.

Thin pure-python facade over the C++ core in ``apcc._apcc``.
"""

from apcc._apcc import (
    ApccError,
    CodecContext,
    InvalidArgumentError,
    PartitionSolution,
    SimOutcome,
    approx_error_bound,
    bary_eval,
    brute_force,
    capacity,
    chebyshev_nodes,
    decode_set,
    empirical_expected_results,
    encode_set,
    encoding_rate,
    make_context,
    make_plan,
    max_divisions,
    monte_carlo,
    multilinearize,
    mvd,
    optimize_partition,
    padding_coefficient_matrix,
    polynomial_weights,
    recovery_threshold,
    round_and_repair,
    sample_subtask_delay,
    set_time,
    solve_relaxed,
)

__all__ = [
    "ApccError",
    "CodecContext",
    "InvalidArgumentError",
    "PartitionSolution",
    "SimOutcome",
    "approx_error_bound",
    "bary_eval",
    "brute_force",
    "capacity",
    "chebyshev_nodes",
    "decode_set",
    "empirical_expected_results",
    "encode_set",
    "encoding_rate",
    "make_context",
    "make_plan",
    "max_divisions",
    "monte_carlo",
    "multilinearize",
    "mvd",
    "optimize_partition",
    "padding_coefficient_matrix",
    "polynomial_weights",
    "recovery_threshold",
    "round_and_repair",
    "sample_subtask_delay",
    "set_time",
    "solve_relaxed",
]

__version__ = "0.1.0"
