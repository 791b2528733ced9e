"""Quadrature rules, Chebyshev expansions and Cauchy-type integrals.

Densities on a finite interval [a, b] come in two flavours:

* second kind -- ``sqrt((t - a)(b - t)) * f(t)``, with ``f`` expanded in U_{l-1};
* first kind  -- ``f(t) / sqrt((t - a)(b - t))``, with ``f`` expanded in T_l.

For both, the Cauchy transform ``int w(t) f(t) / (t - z) dt`` has a closed form
in terms of the Joukowski variable, so one expansion serves interior points,
one-sided boundary values and principal values alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

FIRST = "first"
SECOND = "second"


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_chebyshev1(n: int, a: float = -1.0, b: float = 1.0):
    """Nodes/weights for int_a^b f(t) / sqrt((t-a)(b-t)) dt."""
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * n)
    t = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)
    return t, np.full(n, np.pi / n)


def gauss_chebyshev2(n: int, a: float = -1.0, b: float = 1.0):
    """Nodes/weights for int_a^b sqrt((t-a)(b-t)) f(t) dt."""
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    r = 0.5 * (b - a)
    t = 0.5 * (a + b) + r * np.cos(theta)
    return t, r * r * np.pi / (n + 1) * np.sin(theta) ** 2


def _joukowski(zs: np.ndarray, side, zp=None, zm=None) -> tuple[np.ndarray, np.ndarray]:
    """Return (1/w, sqrt(z^2 - 1)) with w = z + sqrt(z^2 - 1), |w| >= 1.

    ``side`` = +1 / -1 selects the limit from above / below for points of
    (-1, 1); side 0 there gives the average of both limits (principal value),
    which is signalled by returning ``None`` for the square root.
    ``zp`` and ``zm`` optionally supply z + 1 and z - 1 computed without
    cancellation near the endpoints.
    """
    zs = np.asarray(zs, dtype=complex)
    side = np.broadcast_to(np.asarray(side), zs.shape)
    on_cut = (np.abs(zs.imag) == 0.0) & (np.abs(zs.real) < 1.0) & (side != 0)
    zp = zs + 1.0 if zp is None else zp
    zm = zs - 1.0 if zm is None else zm
    sq = np.sqrt(zm) * np.sqrt(zp)
    if np.any(on_cut):
        x = zs.real[on_cut]
        s = np.sqrt((1.0 - x) * (1.0 + x))
        sq[on_cut] = 1j * side[on_cut] * s
    # 1/w rather than z - sqrt(z^2 - 1), which cancels for large |z|
    winv = 1.0 / (zs + sq)
    return winv, sq


def _powers(winv: np.ndarray, n: int) -> np.ndarray:
    """Matrix of winv**l for l = 1..n, shape (len, n)."""
    out = np.empty(winv.shape + (n,), dtype=complex)
    if n == 0:
        return out
    out[..., 0] = winv
    for l in range(1, n):
        out[..., l] = out[..., l - 1] * winv
    return out


def _cheb_u(x: np.ndarray, n: int) -> np.ndarray:
    """U_0..U_{n-1} evaluated at x, shape x.shape + (n,)."""
    x = np.asarray(x)
    out = np.empty(x.shape + (n,), dtype=np.result_type(x, float))
    if n > 0:
        out[..., 0] = 1.0
    if n > 1:
        out[..., 1] = 2.0 * x
    for l in range(2, n):
        out[..., l] = 2.0 * x * out[..., l - 1] - out[..., l - 2]
    return out


def _cheb_t(x: np.ndarray, n: int) -> np.ndarray:
    """T_0..T_{n-1} evaluated at x, shape x.shape + (n,)."""
    x = np.asarray(x)
    out = np.empty(x.shape + (n,), dtype=np.result_type(x, float))
    if n > 0:
        out[..., 0] = 1.0
    if n > 1:
        out[..., 1] = x
    for l in range(2, n):
        out[..., l] = 2.0 * x * out[..., l - 1] - out[..., l - 2]
    return out


@dataclass(frozen=True)
class ChebSeries:
    """Chebyshev expansion of the smooth factor of a weighted density.

    ``kind == SECOND``: coeffs[l-1] = d_l, f = sum_{l>=1} d_l U_{l-1}.
    ``kind == FIRST``:  coeffs[l] = c_l,   f = c_0/2 + sum_{l>=1} c_l T_l.
    """

    kind: str
    coeffs: np.ndarray
    a: float = 0.0
    b: float = 1.0
    _r: float = field(init=False, repr=False)
    _c: float = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_r", 0.5 * (self.b - self.a))
        object.__setattr__(self, "_c", 0.5 * (self.a + self.b))

    def _local(self, z):
        return (np.asarray(z) - self._c) / self._r

    def __call__(self, t):
        """Evaluate the smooth factor f at real points t."""
        x = self._local(np.asarray(t, dtype=float))
        n = len(self.coeffs)
        if self.kind == SECOND:
            return _cheb_u(x, n) @ self.coeffs
        vals = _cheb_t(x, n) @ self.coeffs
        return vals - 0.5 * self.coeffs[0]

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        g = np.sqrt(np.clip((t - self.a) * (self.b - t), 0.0, None))
        return g if self.kind == SECOND else 1.0 / g

    def integral(self) -> complex:
        """int_a^b w(t) f(t) dt."""
        if self.kind == SECOND:
            return self._r**2 * 0.5 * np.pi * self.coeffs[0]
        return 0.5 * np.pi * self.coeffs[0]

    def tail(self) -> float:
        """|last coefficient| / max |coefficient| -- crude convergence indicator."""
        scale = np.max(np.abs(self.coeffs))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.coeffs[-2:])) / scale)

    def cauchy(self, z, side=0):
        """int_a^b w(t) f(t) / (t - z) dt.

        For real z inside (a, b): side = +1/-1 gives the limit from above/below,
        side = 0 the principal value.
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        zs = np.atleast_1d(self._local(z))
        side = np.broadcast_to(np.asarray(side), zs.shape)
        pv_mask = (zs.imag == 0.0) & (np.abs(zs.real) < 1.0) & (side == 0)
        if np.any(pv_mask):
            side = side.copy()
            side[pv_mask] = 1
        zg = np.atleast_1d(z)
        winv, sq = _joukowski(zs, side, (zg - self.a) / self._r, (zg - self.b) / self._r)
        if self.kind == SECOND:
            pw = _powers(winv, len(self.coeffs))
            val = -np.pi * self._r * (pw @ self.coeffs)
            if np.any(pv_mask):
                # strip the +i*pi*density jump contribution
                x = zs.real[pv_mask]
                dens = self._r * np.sqrt((1 - x) * (1 + x)) * (
                    _cheb_u(x, len(self.coeffs)) @ self.coeffs
                )
                val[pv_mask] -= 1j * np.pi * dens
        else:
            n = len(self.coeffs)
            pw = np.concatenate([np.ones(zs.shape + (1,), complex), _powers(winv, n - 1)], axis=-1)
            cf = np.array(self.coeffs, dtype=complex)
            cf[0] *= 0.5
            val = -np.pi * (pw @ cf) / (sq * self._r)
            if np.any(pv_mask):
                x = zs.real[pv_mask]
                fx = _cheb_t(x, n) @ self.coeffs - 0.5 * self.coeffs[0]
                dens = fx / (self._r * np.sqrt((1 - x) * (1 + x)))
                val[pv_mask] -= 1j * np.pi * dens
        return val[0] if scalar else val

    def pv(self, x):
        """Principal value of int_a^b w(t) f(t) / (t - x) dt for x in [a, b].

        The series are polynomials in x, so the endpoint values are the
        continuous extensions of the principal value.
        """
        x = np.asarray(x, dtype=float)
        xs = self._local(x)
        if np.any((xs < -1.0) | (xs > 1.0)):
            raise ValueError("principal value requested outside the interval")
        n = len(self.coeffs)
        if self.kind == SECOND:
            # int sqrt(1-t^2) U_{l-1}(t) / (t - x) dt = -pi T_l(x)
            tl = _cheb_t(xs, n + 1)[..., 1:]
            return -np.pi * self._r * (tl @ self.coeffs)
        # int T_l(t) / (sqrt(1-t^2) (t - x)) dt = pi U_{l-1}(x), zero for l = 0
        ul = _cheb_u(xs, max(n - 1, 0))
        return np.pi * (ul @ self.coeffs[1:]) / self._r


def cheb2_coeffs(f: Callable, n: int, a: float = 0.0, b: float = 1.0) -> ChebSeries:
    """Second-kind coefficients d_1..d_n of f on [a, b] by the n-point Gauss rule."""
    j = np.arange(1, n + 1)
    theta = j * np.pi / (n + 1)
    t = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)
    fv = np.asarray(f(t))
    basis = np.sin(theta)[:, None] * np.sin(np.outer(theta, j))
    coeffs = (2.0 / (n + 1)) * (fv @ basis)
    return ChebSeries(SECOND, coeffs, a, b)


def cheb1_coeffs(f: Callable, n: int, a: float = 0.0, b: float = 1.0) -> ChebSeries:
    """First-kind coefficients c_0..c_{n-1} of f on [a, b] at the Chebyshev roots."""
    j = np.arange(1, n + 1)
    theta = (2.0 * j - 1.0) * np.pi / (2.0 * n)
    t = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)
    fv = np.asarray(f(t))
    coeffs = (2.0 / n) * (fv @ np.cos(np.outer(theta, np.arange(n))))
    return ChebSeries(FIRST, coeffs, a, b)


def cheb2_nodes(n: int, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    return 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)


def cheb1_nodes(n: int, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * n)
    return 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)


def cheb2_from_values(values, a: float = 0.0, b: float = 1.0) -> ChebSeries:
    """Like cheb2_coeffs, from values already sampled at cheb2_nodes."""
    values = np.asarray(values)
    n = len(values)
    j = np.arange(1, n + 1)
    theta = j * np.pi / (n + 1)
    basis = np.sin(theta)[:, None] * np.sin(np.outer(theta, j))
    return ChebSeries(SECOND, (2.0 / (n + 1)) * (values @ basis), a, b)


def cheb1_from_values(values, a: float = 0.0, b: float = 1.0) -> ChebSeries:
    """Like cheb1_coeffs, from values already sampled at cheb1_nodes."""
    values = np.asarray(values)
    n = len(values)
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * n)
    return ChebSeries(FIRST, (2.0 / n) * (values @ np.cos(np.outer(theta, np.arange(n)))), a, b)


def pv_cheb2(f: Callable, xi, n: int):
    """PV int_0^1 sqrt(t(1-t)) f(t) / (t - xi) dt = -(pi/2) sum d_l T_l(2 xi - 1)."""
    xi = np.asarray(xi, dtype=float)
    if np.any((xi <= 0.0) | (xi >= 1.0)):
        raise ValueError("xi must lie in (0, 1)")
    return cheb2_coeffs(f, n).pv(xi)


def pv_cheb1(f: Callable, xi, n: int):
    """PV int_0^1 f(t) / (sqrt(t(1-t)) (t - xi)) dt = 2 pi sum c_l U_{l-1}(2 xi - 1)."""
    xi = np.asarray(xi, dtype=float)
    if np.any((xi <= 0.0) | (xi >= 1.0)):
        raise ValueError("xi must lie in (0, 1)")
    return cheb1_coeffs(f, n).pv(xi)


def semi_infinite(g: Callable, m: float, extra: Callable | None = None, n: int = 256):
    """int_m^inf g(x) extra(x) / sqrt(|p(x)|) dx with p(x) = x (1 - x)(x - m).

    The substitution x = 1/s maps the ray onto (0, 1/m]; the weight
    1/sqrt(s (1/m - s)) is integrated exactly by a Gauss-Chebyshev rule and the
    remainder g extra / (sqrt(m) sqrt(1 - s)) is smooth.
    """
    s, w = gauss_chebyshev1(n, 0.0, 1.0 / m)

    def h(ss):
        x = 1.0 / ss
        val = np.asarray(g(x), dtype=complex)
        if extra is not None:
            val = val * np.asarray(extra(x))
        return val

    vals = h(s)
    probe = h(np.array([1e-12]))
    scale = np.max(np.abs(vals))
    if not np.all(np.isfinite(vals)) or not np.isfinite(probe[0]) or abs(probe[0]) > 1e3 * max(scale, 1.0):
        raise ValueError("integrand grows too fast at infinity for the ray integral to converge")
    total = np.sum(w * vals / (np.sqrt(m) * np.sqrt(1.0 - s)))
    if np.all(np.isreal(total)):
        return float(np.real(total))
    return complex(total)


@dataclass(frozen=True)
class PathSpec:
    """Polygonal path through complex waypoints.

    ``singular`` flags, one per end of the path, mark an inverse square root
    singularity of the integrand at that endpoint.
    """

    waypoints: Sequence[complex]
    singular_start: bool = False
    singular_end: bool = False

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(self.waypoints)[::-1], self.singular_end, self.singular_start)

    def conjugate(self) -> "PathSpec":
        return PathSpec(tuple(np.conj(self.waypoints)), self.singular_start, self.singular_end)


def _graded_panels(levels: int, ratio: float) -> np.ndarray:
    """Panel breakpoints on [0, 1] refined geometrically toward both ends."""
    left = ratio ** np.arange(levels, 0, -1) * 0.5
    pts = np.concatenate([[0.0], left, [0.5], 1.0 - left[::-1], [1.0]])
    return pts


def path_nodes(path: PathSpec, n: int = 16, levels: int = 14, ratio: float = 0.3):
    """Composite Gauss-Legendre nodes along a path.

    Returns (points, dpoint) such that int_path f(z) dz ~ sum f(points) * dpoint.
    Panels are graded geometrically toward every waypoint so that evaluation
    points close to an end of the path are still resolved.  A flagged end uses
    the substitution z = end + (other - end) s^2.
    """
    x, w = gauss_legendre(n)
    br = _graded_panels(levels, ratio)
    pts, dz = [], []
    wp = [complex(p) for p in path.waypoints]
    nseg = len(wp) - 1
    for i in range(nseg):
        za, zb = wp[i], wp[i + 1]
        sing_a = path.singular_start and i == 0
        sing_b = path.singular_end and i == nseg - 1
        lo, hi = br[:-1], br[1:]
        s = (0.5 * (hi - lo))[:, None] * x[None, :] + (0.5 * (hi + lo))[:, None]
        ws = (0.5 * (hi - lo))[:, None] * w[None, :]
        s, ws = s.ravel(), ws.ravel()
        if sing_a and sing_b:
            # split at the midpoint, square-root substitution from both ends
            zm = 0.5 * (za + zb)
            for z0, z1 in ((za, zm), (zb, zm)):
                sign = 1.0 if z0 == za else -1.0
                pts.append(z0 + (z1 - z0) * s**2)
                dz.append(sign * (z1 - z0) * 2 * s * ws)
            continue
        if sing_a:
            pts.append(za + (zb - za) * s**2)
            dz.append((zb - za) * 2 * s * ws)
        elif sing_b:
            pts.append(zb + (za - zb) * s**2)
            dz.append(-(za - zb) * 2 * s * ws)
        else:
            pts.append(za + (zb - za) * s)
            dz.append((zb - za) * ws)
    return np.concatenate(pts), np.concatenate(dz)


def path_integral(f: Callable, path: PathSpec, n: int = 16) -> complex:
    pts, dz = path_nodes(path, n)
    vals = np.asarray(f(pts))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand value on the path")
    return complex(np.sum(vals * dz))
