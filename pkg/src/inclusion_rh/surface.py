"""The elliptic surface u^2 = z (1 - z)(z - m) and the kernel on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UPPER = "upper"
LOWER = "lower"
L0 = "l0"
L1 = "l1"
PLUS = "plus"
MINUS = "minus"


def p(zeta, m: float):
    zeta = np.asarray(zeta)
    return zeta * (1.0 - zeta) * (zeta - m)


def sqrt_p(zeta, m: float):
    """Branch of p(z)^(1/2) on the plane cut along [0, 1] and [m, inf).

    Positive on the negative real axis.  Each factor carries its own cut:
    sqrt(z) sqrt(z - 1) is cut along [0, 1] only, sqrt(m - z) along [m, inf).
    """
    z = np.asarray(zeta, dtype=complex)
    return -np.sqrt(z) * np.sqrt(z - 1.0) * np.sqrt(m - z)


def abs_sqrt_p(xi, m: float):
    xi = np.asarray(xi, dtype=float)
    return np.sqrt(np.abs(xi * (1.0 - xi) * (xi - m)))


def sheet_sign(sheet: str) -> int:
    if sheet == UPPER:
        return 1
    if sheet == LOWER:
        return -1
    raise ValueError(f"unknown sheet {sheet!r}")


@dataclass(frozen=True)
class SurfacePoint:
    zeta: complex
    sheet: str = UPPER

    def u(self, m: float) -> complex:
        return complex(sheet_sign(self.sheet) * sqrt_p(self.zeta, m))


@dataclass(frozen=True)
class SideValue:
    """A point on one bank of a slit, reached from the given sheet.

    On the upper sheet the bank ``plus`` is approached from Im z > 0; on the
    lower sheet ``plus`` means the lower-sheet point glued to the upper-sheet
    ``plus`` bank, i.e. it is approached from Im z < 0.
    """

    xi: float
    slit: str
    side: str
    sheet: str = UPPER

    def __post_init__(self):
        if self.slit not in (L0, L1):
            raise ValueError(f"unknown slit {self.slit!r}")
        if self.side not in (PLUS, MINUS):
            raise ValueError(f"unknown side {self.side!r}")
        sheet_sign(self.sheet)

    def check(self, m: float) -> None:
        if self.slit == L1 and not 0.0 <= self.xi <= 1.0:
            raise ValueError("l1 side values need 0 <= xi <= 1")
        if self.slit == L0 and not self.xi >= m:
            raise ValueError("l0 side values need xi >= m")

    @property
    def approach(self) -> int:
        """Sign of the vanishing imaginary part of z."""
        s = 1 if self.side == PLUS else -1
        return s * sheet_sign(self.sheet)


def side_u(s: SideValue, m: float) -> complex:
    """Boundary value of u on a slit bank; purely imaginary, zero at endpoints."""
    s.check(m)
    mag = float(abs_sqrt_p(s.xi, m))
    sgn = 1 if s.side == PLUS else -1
    if s.slit == L1:
        sgn = -sgn
    # lower sheet: the glued bank carries the same value of u
    return 1j * sgn * mag


def symmetric(pt: SurfacePoint) -> SurfacePoint:
    """The involution (z, u) -> (conj z, -conj u)."""
    return SurfacePoint(complex(np.conj(pt.zeta)), LOWER if pt.sheet == UPPER else UPPER)


def kernel_dV(zeta, u, xi, v, xi0: float):
    """dxi-density of the Cauchy-kernel analogue on the elliptic surface."""
    zeta = np.asarray(zeta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    return 0.5 * ((zeta - xi0) / (xi - xi0) + (u / v) * (xi - xi0) / (zeta - xi0)) / (xi - zeta)


def kernel_dV_genus_n(zeta, u, xi, v, xi_list):
    """dxi-density of the hyperelliptic kernel; points xi_list[0..n] may repeat."""
    zeta = np.asarray(zeta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    prod = np.ones(np.broadcast(zeta, xi).shape, dtype=complex)
    for xj in xi_list:
        prod = prod * (xi - xj) / (zeta - xj)
    return 0.5 * (1.0 + (u / v) * prod) * (1.0 / (xi - zeta) - 1.0 / (xi - xi_list[0]))


def hyperelliptic_p(zeta, m: float, branch_points):
    """p(z) = (z - m) prod (z - k_j) for the n-inclusion surface."""
    zeta = np.asarray(zeta, dtype=complex)
    out = zeta - m
    for kj in branch_points:
        out = out * (zeta - kj)
    return out
