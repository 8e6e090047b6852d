"""Continuous online learning laboratory.

Bifunction loss problems over compact convex decision sets, online algorithms
(projected gradient, entropic mirror descent, follow-the-leader,
extragradient), equilibrium solvers, and exact dynamic/static regret
accounting with reduction-bound certificates.
"""

from col_lab._core import (
    ConfigError,
    DecisionSet,
    DomainError,
    EquilibriumSolution,
    ILProblem,
    NumericError,
    Problem,
    TabularMDP,
    certify_alpha,
    certify_beta,
    check_ep_solution,
    diameter,
    estimate_beta,
    fit_regret_rate,
    il_loss,
    instances,
    load_mdp,
    make_quadratic,
    make_set,
    monotonicity_certificate,
    natural_residual,
    per_round_minimizer,
    play_round,
    policy_from_vector,
    project,
    rollout_feedback,
    run,
    run_experiment_config,
    run_report,
    solve_vi,
    spectral_norm,
    state_distribution,
    vector_from_policy,
    verify,
)

__all__ = [
    "ConfigError",
    "DecisionSet",
    "DomainError",
    "EquilibriumSolution",
    "ILProblem",
    "NumericError",
    "Problem",
    "TabularMDP",
    "certify_alpha",
    "certify_beta",
    "check_ep_solution",
    "diameter",
    "estimate_beta",
    "fit_regret_rate",
    "il_loss",
    "instances",
    "load_mdp",
    "make_quadratic",
    "make_set",
    "monotonicity_certificate",
    "natural_residual",
    "per_round_minimizer",
    "play_round",
    "policy_from_vector",
    "project",
    "rollout_feedback",
    "run",
    "run_experiment_config",
    "run_report",
    "solve_vi",
    "spectral_norm",
    "state_distribution",
    "vector_from_policy",
    "verify",
]

__version__ = "0.1.0"
