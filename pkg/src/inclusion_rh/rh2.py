"""Second Riemann-Hilbert problem: Phi_2 = X (Psi + Omega)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .factorization import Factorizer, X_at, X_plus_l1
from .params import A1, DerivedConstants, ModelParams
from .quadrature import (
    ChebSeries,
    cheb1_from_values,
    cheb1_nodes,
    cheb2_from_values,
    cheb2_nodes,
    gauss_chebyshev1,
    gauss_chebyshev2,
)
from .rh1 import Phi1Solution, g0
from .surface import abs_sqrt_p, sqrt_p


class DegenerateClosure(RuntimeError):
    pass


def Y_pm(tau, fac: Factorizer):
    """Y+ = 1/X+(t+) + 1/X+(t-) and Y- = 1/X+(t+) - 1/X+(t-) on l1."""
    yp = 1.0 / X_plus_l1(tau, +1, fac)
    ym = 1.0 / X_plus_l1(tau, -1, fac)
    return yp + ym, yp - ym


@dataclass(frozen=True)
class Densities:
    """Chebyshev expansions of every l1 density entering Psi.

    psi_a   second kind: N0* Y-/(w (t - xi0)) + sqrt(m - t) g0 Y+/(t - xi0)^2
    F1      second kind: sqrt(m - t) g0 Y+/(t - xi0)^2
    F2      first kind:  (t - xi0) Y+/sqrt(m - t)
    ym_x0   second kind: Y-/(w (t - xi0))
    g0ym    second kind: g0 Y-/w
    with w = sqrt(t (1 - t)).
    """

    F1: ChebSeries
    F2: ChebSeries
    ym_x0: ChebSeries
    g0ym: ChebSeries
    psi_a: ChebSeries


def build_densities(sol1: Phi1Solution, fac: Factorizer, n: int) -> Densities:
    m, xi0, N0s = sol1.m, sol1.xi0, sol1.N0 - A1
    t2 = cheb2_nodes(n)
    yp2, ym2 = Y_pm(t2, fac)
    g2 = g0(t2, sol1)
    w2 = np.sqrt(t2 * (1.0 - t2))
    F1 = np.sqrt(m - t2) * g2 * yp2 / (t2 - xi0) ** 2
    ym_x0 = ym2 / (w2 * (t2 - xi0))
    g0ym = g2 * ym2 / w2
    t1 = cheb1_nodes(n)
    yp1, _ = Y_pm(t1, fac)
    F2 = (t1 - xi0) * yp1 / np.sqrt(m - t1)
    return Densities(
        F1=cheb2_from_values(F1),
        F2=cheb1_from_values(F2),
        ym_x0=cheb2_from_values(ym_x0),
        g0ym=cheb2_from_values(g0ym),
        psi_a=cheb2_from_values(N0s * ym_x0 + F1),
    )


@dataclass(frozen=True)
class Phi2Solution:
    M0: float
    M1: float
    M2: float
    M3: float
    P: float
    Q: float
    P0: float
    Q0: float
    P1: float
    Q1: float
    P2: float
    Q2: float
    sol1: Phi1Solution
    fac: Factorizer
    dens: Densities
    u0: complex
    u0bar: complex  # p^(1/2) at conj(zeta0)

    @property
    def M(self) -> tuple[float, float, float, float]:
        return (self.M0, self.M1, self.M2, self.M3)


def g2_side(xi, side: int, sol1: Phi1Solution):
    """g2 on the bank side = +1 / -1 of l1."""
    xi = np.asarray(xi, dtype=float)
    N0s = sol1.N0 - A1
    return 2j * (N0s + side * abs_sqrt_p(xi, sol1.m) / (xi - sol1.xi0) * g0(xi, sol1))


def _psi(zeta, u, dens: Densities, sol1: Phi1Solution, approach=0):
    zeta = np.asarray(zeta, dtype=complex)
    u = np.asarray(u, dtype=complex)
    xi0 = sol1.xi0
    N0s = sol1.N0 - A1
    first = (zeta - xi0) * dens.psi_a.cauchy(zeta, approach)
    second = 1j * u / (zeta - xi0) * (N0s * dens.F2.cauchy(zeta, approach) + dens.g0ym.cauchy(zeta, approach))
    return (first + second) / (2.0 * math.pi)


def psi_at(zeta, u, sol: Phi2Solution, approach=0):
    """Psi at surface points (zeta, u); approach = +-1 for banks of l1."""
    return _psi(zeta, u, sol.dens, sol.sol1, approach)


def psi_side(xi, side: int, sol: Phi2Solution):
    """Upper-sheet boundary value of Psi on l1 from the Chebyshev PV identities."""
    xi = np.asarray(xi, dtype=float)
    if np.any((xi <= 0.0) | (xi >= 1.0)):
        raise ValueError("psi_side needs 0 < xi < 1")
    sol1, dens = sol.sol1, sol.dens
    xi0, m = sol1.xi0, sol1.m
    N0s = sol1.N0 - A1
    q = abs_sqrt_p(xi, m)
    g = g0(xi, sol1)
    free = 1j / X_plus_l1(xi, side, sol.fac) * (N0s + side * q / (xi - xi0) * g)
    I1 = (xi - xi0) / (2 * math.pi) * dens.F1.pv(xi)
    I2 = N0s * q / (xi - xi0) * dens.F2.pv(xi) / (2 * math.pi)
    I3 = (N0s * (xi - xi0) * dens.ym_x0.pv(xi) + side * q / (xi - xi0) * dens.g0ym.pv(xi)) / (2 * math.pi)
    return free + I1 + side * I2 + I3


def omega_rational(zeta, u, sol: Phi2Solution):
    zeta = np.asarray(zeta, dtype=complex)
    u = np.asarray(u, dtype=complex)
    z0 = sol.fac.zeta0
    xi0 = sol.sol1.xi0
    return (
        sol.M0
        + (sol.M1 + 1j * sol.M2) * (u + sol.u0) / (zeta - z0)
        - (sol.M1 - 1j * sol.M2) * (u - sol.u0bar) / (zeta - np.conj(z0))
        + 2j * sol.M3 * u / (zeta - xi0)
    )


def phi2(zeta, u, sol: Phi2Solution, approach=0):
    """Phi_2 = X (Psi + Omega); approach = +-1 for bank values on either slit."""
    zeta = np.asarray(zeta, dtype=complex)
    X = X_at(zeta, u, sol.fac, approach)
    return X * (psi_at(zeta, u, sol, approach) + omega_rational(zeta, u, sol))


def residue_M3(dens: Densities, sol1: Phi1Solution, n: int) -> float:
    """M3 cancelling the pole of Psi at xi0, by Gauss-Chebyshev quadrature."""
    N0s = sol1.N0 - A1
    xi0 = sol1.xi0
    t1, w1 = gauss_chebyshev1(n, 0.0, 1.0)
    # int Y+/sqrt|p| = int [F2/(t - xi0)] / sqrt(t(1-t))
    part1 = np.sum(w1 * dens.F2(t1) / (t1 - xi0))
    t2, w2 = gauss_chebyshev2(n, 0.0, 1.0)
    part2 = np.sum(w2 * dens.g0ym(t2) / (t2 - xi0))
    return float(np.real(-(N0s * part1 + part2) / (4.0 * math.pi)))


def assemble_constants(
    params: ModelParams, derived: DerivedConstants, sol1: Phi1Solution, fac: Factorizer
) -> Phi2Solution:
    n = params.quad_order
    dens = build_densities(sol1, fac, n)
    M3 = residue_M3(dens, sol1, n)
    lam = derived.lam
    t1, tinf = params.tau1_hat, params.tau1_inf_hat
    M2 = -M3 + t1 * sol1.N1 / (lam * (tinf - t1) * fac.X_inf)

    jac = fac.jacobi
    z1 = jac.zeta1
    z0 = fac.zeta0
    u1 = jac.u1_sign * complex(sqrt_p(z1, params.m))
    u0 = complex(sqrt_p(z0, params.m))
    u0bar = complex(sqrt_p(np.conj(z0), params.m))
    psi1 = complex(_psi(z1, u1, dens, sol1))
    P, Q = psi1.real, psi1.imag
    if min(abs(z1 - z0), abs(z1 - np.conj(z0))) < 1e-12 * max(1.0, abs(z0)):
        raise DegenerateClosure("q1 falls on q0 or its mirror image; perturb zeta0 and re-solve")
    c0 = 2 * u1 / (z1 - params.xi0)
    c1 = (u1 + u0) / (z1 - z0)
    c2 = (u1 - u0bar) / (z1 - np.conj(z0))
    P0, Q0, P1, Q1, P2, Q2 = c0.real, c0.imag, c1.real, c1.imag, c2.real, c2.imag
    if abs(Q2 - Q1) < 1e-10 * (abs(Q1) + abs(Q2)):
        raise DegenerateClosure(
            "Q2 - Q1 vanishes for this auxiliary point zeta0; perturb zeta0 and re-solve"
        )
    M1 = ((P1 + P2) * M2 + P0 * M3 + Q) / (Q2 - Q1)
    M0 = (P2 - P1) * M1 + (Q1 + Q2) * M2 + Q0 * M3 - P
    return Phi2Solution(
        M0=M0, M1=M1, M2=M2, M3=M3, P=P, Q=Q, P0=P0, Q0=Q0, P1=P1, Q1=Q1, P2=P2, Q2=Q2,
        sol1=sol1, fac=fac, dens=dens, u0=u0, u0bar=u0bar,
    )
