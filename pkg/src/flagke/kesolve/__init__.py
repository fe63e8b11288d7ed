"""Kähler-Einstein engine: algebraic condition, ODE data, profiles and checks."""

from __future__ import annotations

from .algebraic import (
    FlatVerdict,
    Infeasible,
    KEProblem,
    RootPair,
    einstein_defect,
    flat_divisibility,
    solve_algebraic,
)
from .ode import ChamberViolation, ODEData, ode_data
from .profile import (
    CompletenessVerdict,
    KEProfile,
    NumericalFailure,
    RKReport,
    chamber_along_profile,
    completeness,
    energy_defect,
    kaehler_profile,
    profile_observables,
    quadrature_profile,
    rk_verify,
    verdiani_check,
)

__all__ = [
    "ChamberViolation",
    "CompletenessVerdict",
    "FlatVerdict",
    "Infeasible",
    "KEProblem",
    "KEProfile",
    "NumericalFailure",
    "ODEData",
    "RKReport",
    "RootPair",
    "chamber_along_profile",
    "completeness",
    "einstein_defect",
    "energy_defect",
    "flat_divisibility",
    "kaehler_profile",
    "ode_data",
    "profile_observables",
    "quadrature_profile",
    "rk_verify",
    "solve_algebraic",
    "verdiani_check",
]
