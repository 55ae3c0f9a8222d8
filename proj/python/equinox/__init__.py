"""Approximate competitive equilibria of convex production economies."""

from ._equinox import (
    ApproximateEquilibrium,
    CheckReport,
    Clause,
    ConvexBody,
    Economy,
    EquinoxError,
    FiniteCone,
    InteriorWitness,
    Metrics,
    Preference,
    PricePolytope,
    RefineSequence,
    ValidationReport,
    approximate_zero,
    boundary_crossing,
    check_equilibrium,
    crossing_modulus,
    demand,
    load_scenario,
    parse_scenario,
    refine_sequence,
    solve,
    validate_economy,
)

__all__ = [
    "ApproximateEquilibrium",
    "CheckReport",
    "Clause",
    "ConvexBody",
    "Economy",
    "EquinoxError",
    "FiniteCone",
    "InteriorWitness",
    "Metrics",
    "Preference",
    "PricePolytope",
    "RefineSequence",
    "ValidationReport",
    "approximate_zero",
    "boundary_crossing",
    "check_equilibrium",
    "crossing_modulus",
    "demand",
    "load_scenario",
    "parse_scenario",
    "refine_sequence",
    "solve",
    "validate_economy",
]
