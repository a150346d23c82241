"""Minimal-resistance bodies in a rarefied Gaussian medium.

A two-dimensional body moves through a gas of non-interacting particles whose
velocities are Gaussian with unit variance; ``V`` is the body speed in those
units. The package evaluates the pressure on front and rear facets, builds the
convex envelopes of the pressure, and solves the fixed-height minimal
resistance problem exactly, with Monte Carlo and brute-force checks.
"""

from .envelope import EnvelopeData, Threshold, critical_slope, pbar, pbar_deriv, u_star
from .errors import (
    AccuracyError,
    DegenerateMediumError,
    DomainError,
    InconsistentPressureError,
    InvalidProfileError,
    NewtonResError,
)
from .optimizer import (
    GOLDEN_A,
    OptimalBody,
    Regime,
    SweepRow,
    classify,
    closed_form_resistance,
    envelopes,
    newton_limit,
    regime_boundaries,
    slow_limit,
    solve,
    solve_one_side,
    split_height,
    sweep,
    sweep_csv,
)
from .pressure import Medium, PressureSide, Side, front, rear
from .quadrature import QuadratureConfig
from .shapes import Body, ConvexProfile, body_resistance, resistance_functional

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "DegenerateMediumError", "DomainError", "InconsistentPressureError",
    "InvalidProfileError", "NewtonResError", "EnvelopeData", "Threshold", "critical_slope",
    "pbar", "pbar_deriv", "u_star", "GOLDEN_A", "OptimalBody", "Regime", "SweepRow",
    "classify", "closed_form_resistance", "envelopes", "newton_limit", "regime_boundaries",
    "slow_limit", "solve", "solve_one_side", "split_height", "sweep", "sweep_csv",
    "Medium", "PressureSide", "Side", "front", "rear", "QuadratureConfig", "Body",
    "ConvexProfile", "body_resistance", "resistance_functional",
]
