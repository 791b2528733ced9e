from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
import scipy.integrate as si
from hypothesis import given, settings
from hypothesis import strategies as st

from inclusion_rh.quadrature import (
    PathSpec,
    cheb1_coeffs,
    cheb2_coeffs,
    gauss_chebyshev1,
    gauss_chebyshev2,
    gauss_legendre,
    path_integral,
    pv_cheb1,
    pv_cheb2,
    semi_infinite,
)


def excision_pv(F, xi, a=0.0, b=1.0, delta=None):
    """PV int_a^b F(t)/(t - xi) dt by symmetric excision.

    The symmetric pair over (xi - d, xi + d) is folded into the regular
    integrand (F(xi + s) - F(xi - s)) / s; the rest is ordinary quadrature.
    """
    d = delta if delta is not None else 0.5 * min(xi - a, b - xi)
    kw = dict(epsabs=1e-14, epsrel=1e-13, limit=400)
    # quadpack reports roundoff near the inverse-square-root endpoints; the
    # result is still far below the test tolerance
    warnings.simplefilter("ignore", si.IntegrationWarning)
    inner = si.quad(lambda s: (F(xi + s) - F(xi - s)) / s, 0.0, d, **kw)[0]
    left = si.quad(lambda t: F(t) / (t - xi), a, xi - d, **kw)[0]
    right = si.quad(lambda t: F(t) / (t - xi), xi + d, b, **kw)[0]
    return inner + left + right


def test_gauss_legendre_integrates_polynomials():
    x, w = gauss_legendre(10)
    for p in range(20):
        exact = 0.0 if p % 2 else 2.0 / (p + 1)
        assert np.sum(w * x**p) == pytest.approx(exact, abs=1e-14)


def test_gauss_chebyshev_weights():
    t, w = gauss_chebyshev1(12, 0.0, 1.0)
    assert np.sum(w) == pytest.approx(math.pi)  # int dt / sqrt(t(1-t))
    t, w = gauss_chebyshev2(12, 0.0, 1.0)
    assert np.sum(w) == pytest.approx(math.pi / 8)  # int sqrt(t(1-t)) dt


@pytest.mark.parametrize("l", range(1, 7))
def test_second_kind_identity_against_cauchy_weight(l):
    """int_{-1}^{1} sqrt(1-t^2) U_{l-1}(t) / (t - x) dt = -pi T_l(x)."""
    for x in (-0.7, -0.1, 0.35, 0.8):
        # sqrt(1 - t^2) U_{l-1}(t) = sin(l acos t)
        f = lambda t: math.sin(l * math.acos(min(max(t, -1.0), 1.0)))
        got = si.quad(f, -1, 1, weight="cauchy", wvar=x, epsabs=1e-12, epsrel=1e-12, limit=400)[0]
        assert got == pytest.approx(-math.pi * math.cos(l * math.acos(x)), abs=1e-9)


def test_pv_cheb2_closed_forms():
    # f = 1: PV int_0^1 sqrt(t(1-t))/(t - xi) dt = -(pi/2)(2 xi - 1)
    xi = np.array([0.1, 0.5, 0.77])
    assert np.allclose(pv_cheb2(lambda t: np.ones_like(t), xi, 8), -0.5 * math.pi * (2 * xi - 1), atol=1e-14)


def test_pv_cheb1_closed_forms():
    xi = np.array([0.2, 0.6])
    # PV int_0^1 f(t) / (sqrt(t(1-t)) (t - xi)) dt: zero for f = 1, 2 pi for f = 2t - 1
    assert np.allclose(pv_cheb1(lambda t: np.ones_like(t), xi, 8), 0.0, atol=1e-13)
    assert np.allclose(pv_cheb1(lambda t: 2 * t - 1, xi, 8), 2 * math.pi, atol=1e-13)


def _random_density(rng):
    a = rng.normal(size=4)
    b = rng.uniform(0.5, 3.0, size=4)
    c = rng.uniform(0, 2 * math.pi, size=4)
    return lambda t: sum(ai * np.cos(bi * t + ci) for ai, bi, ci in zip(a, b, c)) + 0.5 * np.exp(np.asarray(t) * a[0])


def test_pv_cheb2_against_excision_oracle():
    rng = np.random.default_rng(11)
    for _ in range(5):
        f = _random_density(rng)
        for xi in (0.15, 0.5, 0.83):
            F = lambda t: math.sqrt(t * (1 - t)) * f(t)
            assert pv_cheb2(f, xi, 32) == pytest.approx(excision_pv(F, xi), abs=1e-9)


def test_pv_cheb1_against_excision_oracle():
    rng = np.random.default_rng(12)
    for _ in range(5):
        f = _random_density(rng)
        for xi in (0.2, 0.45, 0.9):
            F = lambda t: f(t) / math.sqrt(t * (1 - t))
            assert pv_cheb1(f, xi, 32) == pytest.approx(excision_pv(F, xi), abs=1e-8)


def test_pv_rejects_endpoints():
    with pytest.raises(ValueError):
        pv_cheb2(lambda t: t, 0.0, 8)
    with pytest.raises(ValueError):
        pv_cheb1(lambda t: t, 1.0, 8)


@pytest.mark.parametrize("z", [2.0 + 0.5j, -0.3 - 0.2j, 0.5 + 0.01j, 7.0])
def test_cauchy_transform_off_interval(z):
    f = lambda t: np.exp(t) * np.cos(3 * t)
    s2 = cheb2_coeffs(f, 40)
    s1 = cheb1_coeffs(f, 40)
    k2 = lambda t: math.sqrt(t * (1 - t)) * f(t) / (t - z)
    k1 = lambda t: f(t) / (math.sqrt(t * (1 - t)) * (t - z))
    for ser, kern in ((s2, k2), (s1, k1)):
        re = si.quad(lambda t: kern(t).real, 0, 1, limit=400, epsabs=1e-13)[0]
        im = si.quad(lambda t: kern(t).imag, 0, 1, limit=400, epsabs=1e-13)[0]
        assert abs(ser.cauchy(z) - (re + 1j * im)) < 1e-9


@pytest.mark.parametrize("kind", ["second", "first"])
def test_cauchy_side_limits_follow_plemelj(kind):
    f = lambda t: 1.0 + t**2
    ser = cheb2_coeffs(f, 20) if kind == "second" else cheb1_coeffs(f, 20)
    x = np.array([0.2, 0.5, 0.9])
    up, down, pv = ser.cauchy(x, +1), ser.cauchy(x, -1), ser.pv(x)
    dens = ser.weight(x) * ser(x)
    assert np.allclose(up - down, 2j * math.pi * dens, atol=1e-12)
    assert np.allclose(0.5 * (up + down), pv, atol=1e-12)
    eps = 1e-7
    assert np.allclose(ser.cauchy(x + 1j * eps), up, atol=1e-5)


def test_series_evaluation_and_integral():
    f = lambda t: np.sin(2 * t) + t
    s2 = cheb2_coeffs(f, 30)
    s1 = cheb1_coeffs(f, 30)
    t = np.linspace(0.01, 0.99, 7)
    assert np.allclose(s2(t), f(t), atol=1e-12)
    assert np.allclose(s1(t), f(t), atol=1e-12)
    want2 = si.quad(lambda x: math.sqrt(x * (1 - x)) * f(x), 0, 1, epsabs=1e-14, epsrel=1e-14)[0]
    want1 = si.quad(lambda x: f(x) / math.sqrt(x * (1 - x)), 0, 1, limit=200)[0]
    assert s2.integral() == pytest.approx(want2, abs=1e-12)
    assert s1.integral() == pytest.approx(want1, abs=1e-9)
    assert s2.tail() < 1e-12


def test_semi_infinite_matches_quad():
    m = 2.5
    g = lambda x: (x + 1.0) / x**2
    want = si.quad(lambda x: g(x) / math.sqrt(abs(x * (1 - x) * (x - m))), m, np.inf, limit=400)[0]
    assert semi_infinite(g, m) == pytest.approx(want, rel=1e-9)


def test_semi_infinite_rejects_divergent():
    with pytest.raises(ValueError):
        semi_infinite(lambda x: x**2, 2.0)


def test_path_integral_with_square_root_end():
    # int_0^1 dt / sqrt(t) = 2 along a straight path with a flagged singular start
    val = path_integral(lambda z: 1 / np.sqrt(z), PathSpec((0.0, 1.0), singular_start=True))
    assert val == pytest.approx(2.0, abs=1e-12)
    # reversed path flips the sign
    val = path_integral(lambda z: 1 / np.sqrt(z), PathSpec((0.0, 1.0), singular_start=True).reversed())
    assert val == pytest.approx(-2.0, abs=1e-12)


def test_path_integral_polygon_analytic():
    path = PathSpec((0.0, 1 + 1j, 2.0, -1j))
    val = path_integral(lambda z: z**2, path)
    assert val == pytest.approx((-1j) ** 3 / 3, abs=1e-13)


def test_path_integral_flags_nonfinite():
    with pytest.raises(FloatingPointError):
        path_integral(lambda z: np.where(z.real < 0.5, np.nan, 1.0), PathSpec((0.0, 1.0)))


@settings(max_examples=25, deadline=None)
@given(
    c=st.lists(st.floats(-2, 2), min_size=3, max_size=6),
    xi=st.floats(0.05, 0.95),
)
def test_pv_is_linear_and_polynomial_exact(c, xi):
    poly = np.polynomial.Polynomial(c)
    f = lambda t: poly(t)
    g = lambda t: 2 * poly(t) - 3 * t
    lhs = pv_cheb2(g, xi, 12)
    rhs = 2 * pv_cheb2(f, xi, 12) - 3 * pv_cheb2(lambda t: t, xi, 12)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    # a polynomial density of degree < n is integrated exactly
    F = lambda t: math.sqrt(t * (1 - t)) * f(t)
    assert pv_cheb2(f, xi, 12) == pytest.approx(excision_pv(F, xi), abs=1e-9)


def test_gauss_legendre_classical_values():
    x, w = gauss_legendre(1)
    assert x[0] == 0.0 and w[0] == pytest.approx(2.0)
    x, w = gauss_legendre(2)
    assert np.allclose(np.sort(x), [-1 / math.sqrt(3), 1 / math.sqrt(3)])
    assert np.allclose(w, 1.0)
    x, w = gauss_legendre(3)
    assert np.sum(w * x**4) == pytest.approx(0.4, abs=1e-15)


def test_second_kind_coefficients_read_off():
    d = cheb2_coeffs(lambda t: np.ones_like(t), 10).coeffs
    assert d[0] == pytest.approx(1.0) and np.allclose(d[1:], 0.0, atol=1e-14)
    # 2 (2t - 1) is exactly U_1(2t - 1)
    d = cheb2_coeffs(lambda t: 2 * (2 * t - 1), 10).coeffs
    assert d[1] == pytest.approx(1.0) and np.allclose(np.delete(d, 1), 0.0, atol=1e-14)


def test_second_kind_coefficients_match_weighted_integrals():
    f = lambda t: 1.0 / (t + 2.0)
    d = cheb2_coeffs(f, 24).coeffs
    for l in range(1, 8):
        # orthogonality on [0, 1]: d_l = (8/pi) int sqrt(t(1-t)) U_{l-1}(2t-1) f(t) dt
        Ul = lambda t: math.sin(l * math.acos(2 * t - 1)) / math.sqrt(max(4 * t * (1 - t), 1e-300))
        want = 8 / math.pi * si.quad(lambda t: math.sqrt(t * (1 - t)) * Ul(t) * f(t), 0, 1, epsabs=1e-14, epsrel=1e-13)[0]
        assert d[l - 1] == pytest.approx(want, abs=1e-10)


def test_pv_cheb2_at_three_quarters():
    assert pv_cheb2(lambda t: np.ones_like(t), 0.75, 8) == pytest.approx(-math.pi / 4, abs=1e-14)


def test_pv_of_single_second_kind_term_vanishes_at_t2_zeros():
    U1 = lambda t: 2 * (2 * t - 1)
    for x in (-1 / math.sqrt(2), 1 / math.sqrt(2)):
        assert abs(pv_cheb2(U1, 0.5 * (x + 1), 8)) < 1e-14


def test_semi_infinite_complete_integral():
    # int_m^inf dxi / sqrt|p| = 2 k K; m = 4 gives K(0.5)
    got = semi_infinite(lambda x: np.ones_like(x), 4.0)
    assert got == pytest.approx(float(si.quad(lambda th: 1 / math.sqrt(1 - 0.25 * math.sin(th) ** 2), 0, math.pi / 2)[0]), abs=1e-12)


def _ray_oracle(fn, m):
    # x = m + s^2 removes the endpoint singularity
    kw = dict(epsabs=1e-13, epsrel=1e-13, limit=400)
    h = lambda s, part: part(2 * fn(m + s * s) / math.sqrt((m + s * s) * (m + s * s - 1)))
    re = si.quad(lambda s: h(s, np.real), 0, np.inf, **kw)[0]
    im = si.quad(lambda s: h(s, np.imag), 0, np.inf, **kw)[0]
    return re + 1j * im


def test_semi_infinite_cauchy_type_integrand():
    m, xi0, z = 4.0, -1.0, 1j
    got = semi_infinite(lambda x: x - xi0, m, lambda x: 1.0 / (x - z))
    assert abs(got - _ray_oracle(lambda x: (x - xi0) / (x - z), m)) < 1e-9


def test_semi_infinite_with_pole_left_of_ray():
    m = 4.0
    got = semi_infinite(lambda x: np.ones_like(x), m, lambda x: 1.0 / (x - 0.5))
    assert abs(got - _ray_oracle(lambda x: 1.0 / (x - 0.5), m)) < 1e-9


def test_path_integral_trivial_and_closed():
    assert path_integral(lambda z: np.ones_like(z), PathSpec((0.0, 1.0))) == pytest.approx(1.0, abs=1e-14)
    from inclusion_rh.surface import sqrt_p

    c = 2.0 + 1.0j
    square = PathSpec((c - 0.1 - 0.1j, c + 0.1 - 0.1j, c + 0.1 + 0.1j, c - 0.1 + 0.1j, c - 0.1 - 0.1j))
    assert abs(path_integral(lambda z: 1 / sqrt_p(z, 4.0), square)) < 1e-13


def test_path_integral_to_branch_point():
    from inclusion_rh.surface import sqrt_p

    m, z0 = 4.0, 0.5 + 0.75j
    got = path_integral(lambda z: 1 / sqrt_p(z, m), PathSpec((z0, 0.0), singular_end=True))
    # oracle: z = z0 (1 - s^2) along the same segment, dz = -2 s z0 ds
    f = lambda s: -2 * s * z0 / complex(sqrt_p(z0 * (1 - s * s), m))
    re = si.quad(lambda s: f(s).real, 0, 1, epsabs=1e-12, epsrel=1e-12)[0]
    im = si.quad(lambda s: f(s).imag, 0, 1, epsabs=1e-12, epsrel=1e-12)[0]
    assert abs(got - (re + 1j * im)) < 1e-8
