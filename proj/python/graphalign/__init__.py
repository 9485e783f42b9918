"""Simulation and verification lab for multiple Gaussian graph alignment."""

from ._core import (
    AlignmentEstimate,
    AssignmentResult,
    GraphStack,
    Instance,
    PermutationTuple,
    ProblemParams,
    SizeGuardError,
    cumulant_bound,
    edge_index,
    edge_of_index,
    effective_correlation,
    err,
    err_bruteforce,
    err_pair,
    fano_exact_bound,
    fano_partial_bound,
    hamming,
    instance_from_json,
    it_thresholds,
    kappa_exact,
    kl_monte_carlo,
    kl_transposition,
    kl_upper_full,
    mle_objective,
    mmse_lower_bound,
    random_baseline,
    reduction_err_bound,
    run_trial,
    sample_instance,
    solve,
    trivial_mmse,
    ws_truncated_sum,
    zeta,
)

__all__ = [
    "AlignmentEstimate",
    "AssignmentResult",
    "GraphStack",
    "Instance",
    "PermutationTuple",
    "ProblemParams",
    "SizeGuardError",
    "cumulant_bound",
    "edge_index",
    "edge_of_index",
    "effective_correlation",
    "err",
    "err_bruteforce",
    "err_pair",
    "fano_exact_bound",
    "fano_partial_bound",
    "hamming",
    "instance_from_json",
    "it_thresholds",
    "kappa_exact",
    "kl_monte_carlo",
    "kl_transposition",
    "kl_upper_full",
    "mle_objective",
    "mmse_lower_bound",
    "random_baseline",
    "reduction_err_bound",
    "run_trial",
    "sample_instance",
    "solve",
    "trivial_mmse",
    "ws_truncated_sum",
    "zeta",
]
