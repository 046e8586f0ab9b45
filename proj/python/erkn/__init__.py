"""Diagonal implicit symplectic ERKN integrators."""

from ._erkn import (
    ConfigError,
    Tableau,
    classify_point,
    integrate,
    load_config,
    make_method,
    method_names,
    parse_config,
    phi,
    problem_names,
    rkn_limit,
    run_experiment,
    scan_region,
    serkn_method_names,
    stability_matrix,
    symplectic_residuals,
    taylor_coefficients,
)

__all__ = [
    "ConfigError",
    "Tableau",
    "classify_point",
    "integrate",
    "load_config",
    "make_method",
    "method_names",
    "parse_config",
    "phi",
    "problem_names",
    "rkn_limit",
    "run_experiment",
    "scan_region",
    "serkn_method_names",
    "stability_matrix",
    "symplectic_residuals",
    "taylor_coefficients",
]
