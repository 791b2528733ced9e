"""Uniformly stressed inclusions in an elastic half-plane under antiplane shear.

The inclusion shape is recovered from a conformal map built out of two scalar
Riemann-Hilbert problems on the elliptic surface u^2 = z (1 - z)(z - m).
"""

from __future__ import annotations

from .params import DerivedConstants, ModelParams, ValidationError, ValidationReport, derive, validate
from .shape import Diagnostics, InclusionContour, map_omega, run_diagnostics, trace_inclusion
from .solver import SolverState, solve

__all__ = [
    "DerivedConstants",
    "Diagnostics",
    "InclusionContour",
    "ModelParams",
    "SolverState",
    "ValidationError",
    "ValidationReport",
    "derive",
    "map_omega",
    "run_diagnostics",
    "solve",
    "trace_inclusion",
    "validate",
]

__version__ = "0.1.0"
