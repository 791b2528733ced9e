"""End-to-end solve for one parameter set."""

from __future__ import annotations

from dataclasses import dataclass

from .factorization import Factorizer, JacobiSolution, build_factorizer, solve_jacobi
from .params import DerivedConstants, ModelParams, derive
from .rh1 import Phi1Solution, solve_rh1
from .rh2 import Phi2Solution, assemble_constants


@dataclass(frozen=True)
class SolverState:
    params: ModelParams
    derived: DerivedConstants
    jacobi: JacobiSolution
    phi1: Phi1Solution
    factorizer: Factorizer
    phi2: Phi2Solution


def solve(params: ModelParams) -> SolverState:
    """Run every stage; raises ValidationError on bad input."""
    derived = derive(params)
    jac = solve_jacobi(params, derived)
    sol1 = solve_rh1(params, derived)
    fac = build_factorizer(params, derived, jac)
    sol2 = assemble_constants(params, derived, sol1, fac)
    return SolverState(params, derived, jac, sol1, fac, sol2)
