"""Adaptive conditional gradient sliding and baseline solvers."""

from ._adcgs import (
    ConfigError,
    ContractViolation,
    Error,
    FeasibleSet,
    NumericalError,
    Objective,
    ParseError,
    UnsupportedOperation,
    generate_synthetic,
    inner_iteration_cap,
    load_libsvm,
    reference_solution,
    restart_horizon,
    run_adcgs,
    run_baseline,
    run_restarted,
    solve_subproblem,
    summarize,
    trace_csv_columns,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "Error",
    "FeasibleSet",
    "NumericalError",
    "Objective",
    "ParseError",
    "UnsupportedOperation",
    "generate_synthetic",
    "inner_iteration_cap",
    "load_libsvm",
    "reference_solution",
    "restart_horizon",
    "run_adcgs",
    "run_baseline",
    "run_restarted",
    "solve_subproblem",
    "summarize",
    "trace_csv_columns",
]
