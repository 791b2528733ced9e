"""Complete elliptic integrals and Jacobi elliptic functions via the AGM."""

from __future__ import annotations

import math

import numpy as np

_MAX_ITER = 64


class ConvergenceError(RuntimeError):
    pass


def agm(a: float, b: float, tol: float = 4e-16) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    if a <= 0 or b <= 0:
        raise ValueError("agm requires positive arguments")
    for _ in range(_MAX_ITER):
        if abs(a - b) <= tol * a:
            return 0.5 * (a + b)
        an, bn = 0.5 * (a + b), math.sqrt(a * b)
        if (an, bn) == (a, b):
            return an
        a, b = an, bn
    raise ConvergenceError("AGM iteration did not converge")


def ellipk(k: float) -> float:
    """Complete elliptic integral of the first kind K(k), modulus convention."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must lie in [0, 1), got {k}")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * agm(1.0, kp))


def ellipj(u, k: float):
    """Jacobi sn, cn, dn for real argument(s) ``u`` and modulus ``k`` in [0, 1].

    Uses the descending AGM scheme (Abramowitz & Stegun 16.4).
    """
    u = np.asarray(u, dtype=float)
    if k == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    if k == 1.0:
        t = np.tanh(u)
        s = 1.0 / np.cosh(u)
        return t, s, s.copy()

    a = [1.0]
    c = [k]
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_ITER):
        if abs(c[-1]) <= 4e-16 * a[-1]:
            break
        an = 0.5 * (a[-1] + b)
        cn_ = 0.5 * (a[-1] - b)
        b = math.sqrt(a[-1] * b)
        a.append(an)
        c.append(cn_)
    else:
        raise ConvergenceError("AGM iteration for Jacobi functions did not converge")

    n = len(a) - 1
    phi = (2.0**n) * a[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] * np.sin(phi) / a[j]))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn > 0 on the real line
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    return sn, cn, dn


def sn_complex(z, k: float):
    """Jacobi sn(z, k) for complex z by the imaginary-argument addition formula."""
    z = np.asarray(z, dtype=complex)
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    s, c, d = ellipj(z.real, k)
    s1, c1, d1 = ellipj(z.imag, kp)
    den = c1**2 + (k * s * s1) ** 2
    return (s * d1 + 1j * c * d * s1 * c1) / den
