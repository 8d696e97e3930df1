"""Quartic two-matrix Ising model at genus zero: phase space, free energy,
spectral curve, diagram enumeration and coefficient asymptotics."""

from ._core import (
    SCHEMA,
    ABCPoint,
    PhasePoint,
    Regime,
    classify,
    critical_curve_b,
    critical_surface_high,
    critical_surface_low,
    curve_branch_points,
    endpoint_exponent,
    free_energy,
    free_energy_lambda,
    free_energy_series,
    map_abc,
    measure_mass,
    run_check,
    run_cli,
    sigma_coeff_asymptotic,
    sigma_coeff_exact,
    solve_sigma,
    t_critical,
    wick_genus0_exact,
)

__all__ = [
    "SCHEMA",
    "ABCPoint",
    "PhasePoint",
    "Regime",
    "classify",
    "critical_curve_b",
    "critical_surface_high",
    "critical_surface_low",
    "curve_branch_points",
    "endpoint_exponent",
    "free_energy",
    "free_energy_lambda",
    "free_energy_series",
    "map_abc",
    "measure_mass",
    "run_check",
    "run_cli",
    "sigma_coeff_asymptotic",
    "sigma_coeff_exact",
    "solve_sigma",
    "t_critical",
    "wick_genus0_exact",
]
