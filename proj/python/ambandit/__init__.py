"""Robust experimentation with a safe and an ambiguous arm.

Thin Python veneer over the C++ core: closed-form experimentation cutoffs and
value functions (with and without a free expert signal), variational HJB
solvers on a belief grid, Monte-Carlo simulation of the equilibrium belief
process, and the brute-force two-period max-min example.
"""

from ._core import (
    ClosedForm,
    ExpertClosedForm,
    Grid,
    GridSolution,
    MartingaleCheck,
    ModelParams,
    SimConfig,
    SimResult,
    TwoPeriodConfig,
    TwoPeriodResult,
    ambiguity_cost,
    conditional_mean,
    derive_closed_form,
    derive_expert_closed_form,
    diffusion_coefficient,
    expert_value_function,
    martingale_check,
    optimal_allocation,
    posterior_update,
    second_period_value,
    simulate_equilibrium,
    simulate_forced,
    solve_baseline,
    solve_expert,
    solve_two_period,
    surplus,
    surplus_argmax,
    validate_params,
    value_function,
    worst_case_drift,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedForm",
    "ExpertClosedForm",
    "Grid",
    "GridSolution",
    "MartingaleCheck",
    "ModelParams",
    "SimConfig",
    "SimResult",
    "TwoPeriodConfig",
    "TwoPeriodResult",
    "ambiguity_cost",
    "conditional_mean",
    "derive_closed_form",
    "derive_expert_closed_form",
    "diffusion_coefficient",
    "expert_value_function",
    "martingale_check",
    "optimal_allocation",
    "posterior_update",
    "second_period_value",
    "simulate_equilibrium",
    "simulate_forced",
    "solve_baseline",
    "solve_expert",
    "solve_two_period",
    "surplus",
    "surplus_argmax",
    "validate_params",
    "value_function",
    "worst_case_drift",
    "__version__",
]
