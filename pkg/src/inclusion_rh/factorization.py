"""Jacobi inversion on the elliptic surface and the factorizing function X."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .elliptic import sn_complex
from .params import DerivedConstants, ModelParams
from .quadrature import PathSpec, gauss_chebyshev1, path_integral, path_nodes
from .rh1 import RayCauchy
from .surface import LOWER, UPPER, abs_sqrt_p, sqrt_p

SNAP_WARN = 1e-6
SNAP_FAIL = 1e-3


class JacobiError(RuntimeError):
    pass


def abel(zeta, m: float, n: int = 16) -> complex:
    """int_0^z dt / p^(1/2)(t) along the straight segment on the upper sheet."""
    z = complex(zeta)
    # split the segment where it passes closest to the branch points 1 and m so
    # that the graded panels resolve the nearby square-root singularity
    cuts = []
    for b in (1.0, m):
        s = (b * z.conjugate()).real / abs(z) ** 2 if z != 0 else 0.0
        if 0.02 < s < 0.98 and abs(s * z - b) < 0.5 * abs(z):
            cuts.append(s)
    waypoints = (0.0, *(s * z for s in sorted(cuts)), z)
    path = PathSpec(waypoints, singular_start=True)
    return path_integral(lambda t: 1.0 / sqrt_p(t, m), path, n)


@dataclass(frozen=True)
class GammaPath:
    """Pieces of the contour from q0 to q1, each on one sheet."""

    pieces: tuple  # ((PathSpec, sheet), ...)

    def nodes(self, m: float, n: int = 16):
        pts, dz, v = [], [], []
        for spec, sheet in self.pieces:
            t, d = path_nodes(spec, n)
            sgn = 1.0 if sheet == UPPER else -1.0
            pts.append(t)
            dz.append(d)
            v.append(sgn * sqrt_p(t, m))
        return np.concatenate(pts), np.concatenate(dz), np.concatenate(v)


def _crosses_positive_axis(a: complex, b: complex) -> bool:
    if a.imag * b.imag > 0:
        return False
    if a.imag == b.imag:
        return max(a.real, b.real) >= 0.0
    t = a.imag / (a.imag - b.imag)
    x = a.real + t * (b.real - a.real)
    return x >= 0.0


def _seg_dist(a: complex, b: complex, c: complex) -> float:
    """Distance from point c to segment [a, b]."""
    d = b - a
    if d == 0:
        return abs(c - a)
    t = ((c - a) * d.conjugate()).real / abs(d) ** 2
    return abs(a + min(max(t, 0.0), 1.0) * d - c)


def _seg_seg_dist(a, b, c, d) -> float:
    return min(_seg_dist(a, b, c), _seg_dist(a, b, d), _seg_dist(c, d, a), _seg_dist(c, d, b))


def _clearance(waypoints, m: float, xi0: float) -> float:
    """Smallest distance from the interior of a polygonal path to the slits and xi0."""
    far = m + 1e3
    best = math.inf
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        if _crosses_positive_axis(a, b):
            return -1.0
        best = min(best, _seg_seg_dist(a, b, 0.0, 1.0), _seg_seg_dist(a, b, m, far), _seg_dist(a, b, xi0))
    return best


def _with_clearance(za: complex, zb: complex, m: float, xi0: float) -> tuple:
    """Polygonal path za -> zb avoiding [0, inf) and xi0, chosen for clearance.

    The endpoints themselves are excluded from the clearance measure by
    trimming a small piece off each end.
    """
    def trimmed(wp):
        wp = list(wp)
        wp[0] = wp[0] + 0.05 * (wp[1] - wp[0])
        wp[-1] = wp[-1] + 0.05 * (wp[-2] - wp[-1])
        return wp

    scale = max(1.0, abs(xi0), abs(za), abs(zb))
    cands = [(za, zb)]
    for x in (0.5 * xi0, 1.5 * xi0, 2.5 * xi0, -scale, -2 * scale):
        cands.append((za, complex(x), zb))
    for y in (0.5, 1.0, 2.0):
        for x in (0.5 * xi0, -scale):
            top = complex(x, y * scale)
            bot = complex(x, -y * scale)
            cands.append((za, top, zb))
            cands.append((za, bot, zb))
            cands.append((za, top, complex(x), zb))
            cands.append((za, bot, complex(x), zb))
    scored = [(_clearance(trimmed(c), m, xi0) - 0.01 * _length(c), c) for c in cands]
    scored = [sc for sc in scored if sc[0] > -0.5]
    if not scored:
        raise JacobiError("no admissible integration path between q0 and q1")
    return max(scored, key=lambda sc: sc[0])[1]


def _length(wp) -> float:
    return sum(abs(b - a) for a, b in zip(wp[:-1], wp[1:]))


def build_gamma(zeta0: complex, zeta1: complex, sheet1: str, xi0: float, m: float) -> GammaPath:
    if sheet1 == LOWER:
        # through the branch point 0, switching sheets there
        return GammaPath(
            (
                (PathSpec((zeta0, 0.0), singular_end=True), UPPER),
                (PathSpec((0.0, zeta1), singular_start=True), LOWER),
            )
        )
    return GammaPath(((PathSpec(_with_clearance(zeta0, zeta1, m, xi0)), UPPER),))


@dataclass(frozen=True)
class JacobiSolution:
    h: complex
    zeta1: complex
    sheet1: str
    n_a: int
    n_b: int
    residual: float
    snap_distance: float
    other_distance: float

    @property
    def u1_sign(self) -> int:
        return 1 if self.sheet1 == UPPER else -1


def _snap(I, k, K, Kp):
    na = -I.imag / (4 * k * K)
    nb = I.real / (4 * k * Kp)
    dist = max(abs(na - round(na)), abs(nb - round(nb)))
    return int(round(na)), int(round(nb)), dist


def solve_jacobi(params: ModelParams, derived: DerivedConstants, n: int = 16) -> JacobiSolution:
    m, z0 = params.m, complex(params.zeta0)
    k, K, Kp = derived.k, derived.K, derived.Kp
    I0 = abel(z0, m, n)
    h = I0 - 1j * k * K
    zeta1 = complex(sn_complex(1j * h / (2 * k), k) ** 2)
    if not np.isfinite(zeta1):
        raise JacobiError("elliptic sine evaluation failed")
    I1 = abel(zeta1, m, n)
    na_m, nb_m, d_minus = _snap(I0 - I1 - 1j * k * K, k, K, Kp)
    na_p, nb_p, d_plus = _snap(I0 + I1 - 1j * k * K, k, K, Kp)
    if d_minus <= d_plus:
        sheet1, na, nb, dist, other = UPPER, na_m, nb_m, d_minus, d_plus
    else:
        sheet1, na, nb, dist, other = LOWER, na_p, nb_p, d_plus, d_minus
    if dist > SNAP_FAIL:
        raise JacobiError(
            f"neither sheet assignment gives integer periods (distances {d_minus:.3g}, {d_plus:.3g})"
        )
    if dist > SNAP_WARN:
        warnings.warn(f"snapping homology integers at distance {dist:.3g}", RuntimeWarning)

    gamma = build_gamma(z0, zeta1, sheet1, params.xi0, m)
    t, dz, v = gamma.nodes(m, n)
    to_q1 = I0 + np.sum(dz / v)
    residual = abs(to_q1 + na * derived.A + nb * derived.B - h)
    return JacobiSolution(h, zeta1, sheet1, na, nb, float(residual), float(dist), float(other))


@dataclass(frozen=True)
class Factorizer:
    jacobi: JacobiSolution
    gamma: GammaPath
    m: float
    xi0: float
    zeta0: complex
    ray: RayCauchy
    X_inf: float
    nodes: tuple  # (t, dt, v) along gamma
    n_semi: int
    segments: tuple = ()  # straight pieces (a, b) of gamma in the zeta-plane

    @property
    def weight(self) -> float:
        return 0.5 - 2.0 * self.jacobi.n_a

    def _gamma_term(self, zeta, u):
        """-int_gamma dV((t, v), (z, u)) for arrays of targets."""
        t, dt, v = self.nodes
        z = zeta[..., None]
        uu = u[..., None]
        f = 0.5 * ((z - self.xi0) / (t - self.xi0) + (uu / v) * (t - self.xi0) / (z - self.xi0))
        # subtract the value of f at t = z (1 on the sheet of the nearest path point,
        # 0 on the other) and add its integral back in closed form, so targets close
        # to gamma do not meet a near-singular sum
        near = np.argmin(np.abs(t - z), axis=-1)
        c = np.where((u / v[near]).real > 0.0, 1.0, 0.0)
        logs = sum(np.log((b - zeta) / (a - zeta)) for a, b in self.segments)
        return -(((f - c[..., None]) / (t - z)) @ dt + c * logs)

    def log_X(self, zeta, u, approach=0):
        zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
        u = np.broadcast_to(np.asarray(u, dtype=complex), zeta.shape)
        approach = np.broadcast_to(np.asarray(approach), zeta.shape)
        e1 = self.weight * u / (1j * (zeta - self.xi0)) * self.ray(zeta, approach)
        e2 = self._gamma_term(zeta, u)
        e3 = np.conj(self._gamma_term(np.conj(zeta), -np.conj(u)))
        return e1 + e2 + e3


def build_factorizer(params: ModelParams, derived: DerivedConstants, jac: JacobiSolution | None = None) -> Factorizer:
    if jac is None:
        jac = solve_jacobi(params, derived)
    gamma = build_gamma(complex(params.zeta0), jac.zeta1, jac.sheet1, params.xi0, params.m)
    nodes = gamma.nodes(params.m, 16)
    n_semi = 4 * params.quad_order
    return Factorizer(
        jacobi=jac,
        gamma=gamma,
        m=params.m,
        xi0=params.xi0,
        zeta0=complex(params.zeta0),
        ray=RayCauchy.build(params.m, params.xi0, n_semi),
        X_inf=abs((jac.zeta1 - params.xi0) / (complex(params.zeta0) - params.xi0)),
        nodes=nodes,
        n_semi=n_semi,
        segments=tuple(
            (complex(a), complex(b))
            for spec, _ in gamma.pieces
            for a, b in zip(spec.waypoints[:-1], spec.waypoints[1:])
        ),
    )


def X_at(zeta, u, fac: Factorizer, approach=0):
    """X at surface points (zeta, u); approach = +-1 selects a bank of l0."""
    out = np.exp(fac.log_X(zeta, u, approach))
    return out.reshape(np.shape(zeta))


def X_plus_l1(xi, side: int, fac: Factorizer):
    """Upper-sheet boundary value of X on the bank side = +1 / -1 of l1.

    All integrals are regular: the ray integral after t = 1/s and the real
    part of the gamma integral, whose combination with its mirror image is
    twice the real part on the real axis.
    """
    shape = np.shape(xi)
    xi = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    m, xi0 = fac.m, fac.xi0
    s, w = gauss_chebyshev1(fac.n_semi, 0.0, 1.0 / m)
    dens = (1.0 - s[:, None] * xi0) / (math.sqrt(m) * np.sqrt(1.0 - s[:, None]) * (1.0 - s[:, None] * xi[None, :]))
    ray = w @ dens
    q = abs_sqrt_p(xi, m)
    t, dt, v = fac.nodes
    x = xi[:, None]
    integrand = ((x - xi0) / (t - xi0) - side * (1j * q[:, None] / v) * (t - xi0) / (x - xi0)) / (t - x)
    gam = (integrand @ dt).real
    out = np.exp(-side * fac.weight * q / (xi - xi0) * ray - gam)
    return out.reshape(shape)


def X_infinity(fac: Factorizer) -> float:
    return fac.X_inf
