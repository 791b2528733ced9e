from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inclusion_rh.surface import (
    L0,
    L1,
    LOWER,
    MINUS,
    PLUS,
    UPPER,
    SideValue,
    SurfacePoint,
    abs_sqrt_p,
    hyperelliptic_p,
    kernel_dV,
    kernel_dV_genus_n,
    p,
    side_u,
    sqrt_p,
    symmetric,
)

M = 4.0


def test_branch_positive_on_negative_axis():
    x = np.array([-0.1, -1.0, -7.0])
    assert np.allclose(sqrt_p(x, M).imag, 0.0)
    assert np.all(sqrt_p(x, M).real > 0)


def test_branch_squares_to_p():
    z = np.array([0.3 + 0.4j, -2 - 1j, 5 + 3j, 2.0 + 0.0j])
    assert np.allclose(sqrt_p(z, M) ** 2, p(z, M))


def test_branch_is_continuous_across_gap():
    # between the slits (1, m) the branch must be continuous
    x = np.array([1.5, 2.5, 3.5])
    up = sqrt_p(x + 1e-12j, M)
    lo = sqrt_p(x - 1e-12j, M)
    assert np.allclose(up, lo, atol=1e-9)


@pytest.mark.parametrize("slit, xi", [(L1, 0.3), (L0, 6.0)])
def test_side_values_match_limits(slit, xi):
    eps = 1e-10
    for side, sgn in ((PLUS, 1), (MINUS, -1)):
        want = sqrt_p(xi + sgn * 1j * eps, M)
        got = side_u(SideValue(xi, slit, side), M)
        assert abs(got - want) < 1e-4
        assert got.real == 0.0


def test_lower_sheet_glued_bank_has_same_u():
    a = side_u(SideValue(0.4, L1, PLUS, UPPER), M)
    b = side_u(SideValue(0.4, L1, PLUS, LOWER), M)
    assert a == b
    assert SideValue(0.4, L1, PLUS, LOWER).approach == -1
    assert SideValue(0.4, L1, PLUS, UPPER).approach == 1


def test_side_value_domain_checks():
    with pytest.raises(ValueError):
        side_u(SideValue(2.0, L1, PLUS), M)
    with pytest.raises(ValueError):
        side_u(SideValue(2.0, L0, PLUS), M)
    with pytest.raises(ValueError):
        SideValue(0.5, "l7", PLUS)
    with pytest.raises(ValueError):
        SideValue(0.5, L1, "up")


def test_side_u_vanishes_at_branch_points():
    for xi, slit in ((0.0, L1), (1.0, L1), (M, L0)):
        assert side_u(SideValue(xi, slit, PLUS), M) == 0


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-5, 9), y=st.floats(0.01, 5), upper=st.booleans())
def test_symmetry_involution(x, y, upper):
    pt = SurfacePoint(complex(x, y), UPPER if upper else LOWER)
    s = symmetric(pt)
    assert s.zeta == np.conj(pt.zeta)
    assert s.u(M) == pytest.approx(-np.conj(pt.u(M)), abs=1e-12 * (1 + abs(pt.u(M))))
    assert symmetric(s) == pt


def test_sheets_differ_in_sign():
    z = 0.7 + 2.0j
    assert SurfacePoint(z, UPPER).u(M) == -SurfacePoint(z, LOWER).u(M)


def test_abs_sqrt_p_matches_side_values():
    xi = np.linspace(0.05, 0.95, 5)
    assert np.allclose(abs_sqrt_p(xi, M), np.abs(sqrt_p(xi + 1e-14j, M)))


def test_kernel_has_unit_residue_on_same_sheet():
    # near xi = zeta with v = u the kernel behaves like 1/(xi - zeta)
    z = 0.4 + 1.0j
    u = complex(sqrt_p(z, M))
    h = 1e-6
    xi = z + h
    v = complex(sqrt_p(xi, M))
    assert abs(kernel_dV(z, u, xi, v, -1.0) * h - 1.0) < 1e-5
    # on the opposite sheet the pole cancels
    assert abs(kernel_dV(z, -u, xi, v, -1.0) * h) < 1e-5


def test_genus_n_kernel_reduces_to_genus_one():
    xi0 = -1.0
    z = np.array([0.4 + 1.0j, 3 - 2j])
    u = sqrt_p(z, M)
    xi = np.array([2.0 + 0.5j, -0.3 + 0.1j])
    v = sqrt_p(xi, M)
    a = kernel_dV(z, u, xi, v, xi0)
    b = kernel_dV_genus_n(z, u, xi, v, [xi0, xi0])
    # the genus-n form differs from the genus-one form by a zeta-independent term
    c = kernel_dV(z[::-1], u[::-1], xi, v, xi0)
    d = kernel_dV_genus_n(z[::-1], u[::-1], xi, v, [xi0, xi0])
    assert np.allclose(a - b, c - d, atol=1e-12)


def test_hyperelliptic_p_genus_one():
    z = np.array([0.2 + 0.3j, 4 - 1j])
    # (z - m) z (z - 1) = -p(z)
    assert np.allclose(hyperelliptic_p(z, M, [0.0, 1.0]), -p(z, M))


def test_branch_sample_values():
    assert complex(sqrt_p(-1.0, M)) == pytest.approx(np.sqrt(10.0), abs=1e-14)
    assert complex(sqrt_p(0.0, M)) == 0
    assert side_u(SideValue(0.5, L1, PLUS), M) == pytest.approx(-0.935414j, abs=1e-6)
    assert side_u(SideValue(0.5, L1, MINUS), M) == pytest.approx(0.935414j, abs=1e-6)
    assert side_u(SideValue(5.0, L0, PLUS), M) == pytest.approx(4.472136j, abs=1e-6)


def test_branch_matches_analytic_continuation():
    # follow the phase of sqrt(p) from xi = -1 to 2 + 0.5i through the upper half plane
    path = np.concatenate([np.linspace(-1, -1 + 2j, 400), np.linspace(-1 + 2j, 2 + 2j, 400), np.linspace(2 + 2j, 2 + 0.5j, 400)])
    w = np.sqrt(10.0) + 0j
    for z in path[1:]:
        r = np.sqrt(complex(p(z, M)))
        w = r if abs(r - w) < abs(r + w) else -r
    assert complex(sqrt_p(2 + 0.5j, M)) == pytest.approx(w, abs=1e-12)


def test_symmetric_examples():
    assert symmetric(SurfacePoint(2 + 1j, UPPER)) == SurfacePoint(2 - 1j, LOWER)
    assert symmetric(SurfacePoint(-3.0 + 0j, UPPER)) == SurfacePoint(-3.0 + 0j, LOWER)


def test_kernel_symmetry():
    xi0 = -1.0
    xi = np.array([0.3 + 0.2j, 6.0 - 1.0j])
    v = sqrt_p(xi, M)
    z = 1.5 + 0.7j
    u = complex(sqrt_p(z, M))
    a = kernel_dV(z, u, xi, v, xi0)
    b = kernel_dV(np.conj(z), -np.conj(u), np.conj(xi), -np.conj(v), xi0)
    assert np.allclose(a, np.conj(b), atol=1e-14)


@pytest.mark.parametrize("genus_n", [False, True])
def test_kernel_decays_like_three_halves(genus_n):
    z = 0.4 + 1.0j
    u = complex(sqrt_p(z, M))
    x = np.array([1e3, 4e3]) + 0j
    v = sqrt_p(x + 1e-300j, M)
    if genus_n:
        d = kernel_dV_genus_n(z, u, x, v, [-1.0, -1.0])
    else:
        d = kernel_dV(z, u, x, v, -1.0)
    assert abs(d[0] / d[1]) == pytest.approx(8.0, rel=2e-2)


def test_kernel_bounded_in_target():
    xi, xi0 = 0.3 + 0.0j, -1.0
    v = complex(sqrt_p(xi + 1e-300j, M))
    Z = 1e7j
    d = kernel_dV(Z, complex(sqrt_p(Z, M)), xi, v, xi0)
    assert abs(d + 0.5 / (xi - xi0)) < 1e-2
