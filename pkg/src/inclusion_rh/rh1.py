"""First Riemann-Hilbert problem: jumps 2 i b_j across both slits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import A1, DerivedConstants, ModelParams
from .quadrature import ChebSeries, cheb1_coeffs, gauss_chebyshev1
from .surface import abs_sqrt_p


def _as_eval(zeta, u, approach):
    zeta = np.asarray(zeta, dtype=complex)
    u = np.asarray(u, dtype=complex)
    approach = np.asarray(approach, dtype=int)
    return zeta, u, approach


@dataclass(frozen=True)
class RayCauchy:
    """Cauchy integrals over the ray [m, inf) of (t - xi0) / sqrt|p(t)|.

    After t = 1/s the density lives on [0, 1/m] with a first-kind weight:
    J(z) = int_0^{1/m} phi(s) / (sqrt(s (1/m - s)) (1 - s z)) ds.
    """

    series: ChebSeries

    @classmethod
    def build(cls, m: float, xi0: float, n: int) -> "RayCauchy":
        phi = lambda s: (1.0 - s * xi0) / (math.sqrt(m) * np.sqrt(1.0 - s))
        return cls(cheb1_coeffs(phi, n, 0.0, 1.0 / m))

    def __call__(self, zeta, approach=0):
        zeta = np.asarray(zeta, dtype=complex)
        # z + i0 maps to 1/z - i0
        return -self.series.cauchy(1.0 / zeta, -np.asarray(approach)) / zeta


@dataclass(frozen=True)
class Phi1Solution:
    N0: float
    N1: float
    b0: float
    b1: float
    m: float
    xi0: float
    quad_order: int
    ray: RayCauchy
    seg: ChebSeries  # first-kind series of (t - xi0)/sqrt(m - t) on [0, 1]

    def G(self, zeta, approach=0):
        """2 N1 - (b0/pi) J(z) + (b1/pi) L(z); vanishes at z = xi0."""
        J = self.ray(zeta, approach)
        L = self.seg.cauchy(zeta, approach)
        return 2.0 * self.N1 - self.b0 / math.pi * J + self.b1 / math.pi * L


def solve_rh1(params: ModelParams, derived: DerivedConstants) -> Phi1Solution:
    n = params.quad_order
    m, xi0 = params.m, params.xi0
    seg = cheb1_coeffs(lambda t: (t - xi0) / np.sqrt(m - t), n)
    return Phi1Solution(
        N0=params.N0_star + A1,
        N1=params.N1,
        b0=params.b0,
        b1=derived.b1,
        m=m,
        xi0=xi0,
        quad_order=n,
        ray=RayCauchy.build(m, xi0, 4 * n),
        seg=seg,
    )


def phi1(zeta, u, sol: Phi1Solution, approach=0):
    """Phi_1 at surface points (zeta, u); approach = +-1 for slit banks.

    The two-bank contour integrals of the kernel reduce to
    N0 + i u G(z) / (z - xi0), finite at xi0 because G(xi0) = 0.
    """
    zeta, u, approach = _as_eval(zeta, u, approach)
    return sol.N0 + 1j * u * sol.G(zeta, approach) / (zeta - sol.xi0)


def g0(xi, sol: Phi1Solution):
    """Real density of Re Phi_1 on l1, via the ray substitution and a PV series."""
    xi = np.asarray(xi, dtype=float)
    m, xi0 = sol.m, sol.xi0
    s, w = gauss_chebyshev1(4 * sol.quad_order, 0.0, 1.0 / m)
    F0 = (1.0 - s[:, None] * xi0) / (np.sqrt(1.0 - s[:, None]) * (1.0 - s[:, None] * xi[None, ...].reshape(1, -1)))
    ray = (w @ F0).reshape(xi.shape)
    pv = sol.seg.pv(xi)
    return 2.0 * sol.N1 - sol.b0 / (math.pi * math.sqrt(m)) * ray + sol.b1 / math.pi * pv


def re_phi1_plus_l1(xi, side: int, sol: Phi1Solution):
    """Re of the upper-sheet limit of Phi_1 on the bank side = +1 / -1 of l1."""
    xi = np.asarray(xi, dtype=float)
    return sol.N0 + side * abs_sqrt_p(xi, sol.m) / (xi - sol.xi0) * g0(xi, sol)
