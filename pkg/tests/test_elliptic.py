from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from inclusion_rh.elliptic import agm, ellipj, ellipk, sn_complex

MODULI = [0.0, 0.1, 0.3, 0.5, 0.7071067811865476, 0.9, 0.99, 0.9999]


@pytest.mark.parametrize("k", MODULI)
def test_ellipk_matches_scipy(k):
    # scipy uses the parameter m = k^2
    assert ellipk(k) == pytest.approx(sp.ellipk(k * k), rel=1e-14)


def test_ellipk_closed_form_at_zero():
    assert ellipk(0.0) == pytest.approx(math.pi / 2, rel=1e-15)


def test_ellipk_rejects_bad_modulus():
    with pytest.raises(ValueError):
        ellipk(1.0)
    with pytest.raises(ValueError):
        ellipk(-0.1)


def test_agm_known_value():
    # Gauss's constant: 1 / agm(1, sqrt 2) = 0.8346268416740731...
    assert 1.0 / agm(1.0, math.sqrt(2.0)) == pytest.approx(0.8346268416740731, rel=1e-15)


def test_agm_rejects_nonpositive():
    with pytest.raises(ValueError):
        agm(0.0, 1.0)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.9999])
def test_ellipj_matches_mpmath(k):
    u = np.linspace(-3.0, 5.0, 17)
    sn, cn, dn = ellipj(u, k)
    for ui, s, c, d in zip(u, sn, cn, dn):
        m = k * k
        assert s == pytest.approx(float(mpmath.ellipfun("sn", ui, m=m)), abs=1e-14)
        assert c == pytest.approx(float(mpmath.ellipfun("cn", ui, m=m)), abs=1e-14)
        assert d == pytest.approx(float(mpmath.ellipfun("dn", ui, m=m)), abs=1e-14)


def test_ellipj_degenerate_moduli():
    u = np.linspace(-2, 2, 9)
    s, c, d = ellipj(u, 0.0)
    assert np.allclose(s, np.sin(u)) and np.allclose(c, np.cos(u)) and np.all(d == 1)
    s, c, d = ellipj(u, 1.0)
    assert np.allclose(s, np.tanh(u)) and np.allclose(c, 1 / np.cosh(u))


@pytest.mark.parametrize("k", [0.2, 0.6, 0.95])
def test_sn_at_quarter_period(k):
    K = ellipk(k)
    s, c, d = ellipj(K, k)
    assert s == pytest.approx(1.0, abs=1e-12)
    assert d == pytest.approx(math.sqrt(1 - k * k), abs=1e-12)


@pytest.mark.parametrize("k", [0.2, 0.6, 0.95])
def test_sn_half_period_identity(k):
    K = ellipk(k)
    s = ellipj(0.5 * K, k)[0]
    assert s**2 == pytest.approx(1.0 / (1.0 + math.sqrt(1 - k * k)), abs=1e-13)


@pytest.mark.parametrize("z", [0.3 + 0.2j, -1.1 + 0.7j, 2.0 - 1.5j, 0.5j])
@pytest.mark.parametrize("k", [0.3, 0.7071067811865476, 0.95])
def test_sn_complex_matches_mpmath(z, k):
    want = complex(mpmath.ellipfun("sn", mpmath.mpc(z.real, z.imag), m=k * k))
    assert abs(sn_complex(z, k) - want) < 1e-12 * max(1.0, abs(want))


@settings(max_examples=60, deadline=None)
@given(u=st.floats(-20, 20), k=st.floats(0.0, 0.999))
def test_jacobi_pythagorean_identities(u, k):
    s, c, d = ellipj(u, k)
    assert s * s + c * c == pytest.approx(1.0, abs=1e-13)
    assert d * d + k * k * s * s == pytest.approx(1.0, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(-3, 3), k=st.floats(0.05, 0.95))
def test_sn_complex_real_axis_reduces(x, k):
    assert abs(sn_complex(complex(x, 0.0), k) - ellipj(x, k)[0]) < 1e-14
