import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from newtonres import specfun
from newtonres.errors import DomainError

mpmath.mp.dps = 40


def _l_oracle(z):
    # half the radial moment, by high-precision quadrature
    z = mpmath.mpf(z)
    val = mpmath.quad(lambda r: r ** 3 * mpmath.exp(-r * r / 2 + z * r), [0, 5, 20, 80, mpmath.inf])
    return val / 2


def _lp_oracle(z):
    z = mpmath.mpf(z)
    val = mpmath.quad(lambda r: r ** 4 * mpmath.exp(-r * r / 2 + z * r), [0, 5, 20, 80, mpmath.inf])
    return val / 2


def test_erf_reference_value():
    assert specfun.erf(1.0) == pytest.approx(0.8427007929497149, rel=1e-15)


@pytest.mark.parametrize("x", [-5.5, -2.0, -0.3, 0.0, 1e-8, 0.7, 3.1, 6.0])
def test_erf_erfc_against_mpmath(x):
    assert_allclose(specfun.erf(x), float(mpmath.erf(x)), rtol=1e-15, atol=1e-300)
    assert_allclose(specfun.erfc(x), float(mpmath.erfc(x)), rtol=2e-15)
    assert_allclose(specfun.erfcx(x), float(mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(x)), rtol=2e-15)


def test_erf_rejects_nonfinite():
    with pytest.raises(DomainError):
        specfun.erf(float("nan"))
    with pytest.raises(DomainError):
        specfun.l(np.array([0.0, np.inf]))


def test_l_at_zero():
    assert specfun.l(0.0) == pytest.approx(1.0, rel=1e-15)
    assert specfun.l_prime(0.0) == pytest.approx(3 * math.sqrt(math.pi) / (2 * math.sqrt(2)), rel=1e-15)


def test_l_is_half_the_radial_moment():
    full = float(mpmath.quad(lambda r: r ** 3 * mpmath.exp(-r * r / 2), [0, mpmath.inf]))
    assert full == pytest.approx(2.0, rel=1e-15)
    assert specfun.l(0.0) == pytest.approx(full / 2, rel=1e-15)


ZS = [-35.0, -20.0, -8.0, -3.0, -2.0001, -1.9999, -1.0, -0.1, 0.5, 2.0, 7.5, 15.0, 30.0]


@pytest.mark.parametrize("z", ZS)
def test_l_against_quadrature_oracle(z):
    assert_allclose(specfun.l(z), float(_l_oracle(z)), rtol=5e-14)
    assert_allclose(specfun.l_prime(z), float(_lp_oracle(z)), rtol=2e-13)


def test_l_continuous_across_switch():
    z = np.array([np.nextafter(-2.0, -3.0), -2.0])
    v = specfun.l(z)
    assert abs(v[0] - v[1]) <= 5e-14 * v[1]


def test_l_overflow_threshold():
    assert 37.0 < specfun.L_OVERFLOW_Z < 37.5
    assert np.isfinite(specfun.l(specfun.L_OVERFLOW_Z))
    with pytest.raises(OverflowError):
        specfun.l(specfun.L_OVERFLOW_Z + 0.01)


def test_scaled_variants_agree_and_stay_finite():
    z = np.linspace(-10, 10, 41)
    s = 3.0
    assert_allclose(specfun.l_scaled(z, s), math.exp(-s * s / 2) * specfun.l(z), rtol=3e-14)
    assert_allclose(specfun.l_prime_scaled(z, s), math.exp(-s * s / 2) * specfun.l_prime(z), rtol=3e-14)
    big = np.array([-37.0, 0.0, 37.0])
    assert np.all(np.isfinite(specfun.l_scaled(big, 37.0)))
    assert np.all(np.isfinite(specfun.l_prime_scaled(big, 37.0)))


@pytest.mark.parametrize("n", [0, 1, 2, 4])
@pytest.mark.parametrize("x", [1.5, 4.0, 25.0])
def test_scaled_ierfc_against_mpmath(n, x):
    # i^n erfc(x) = 2/sqrt(pi) int_x^inf (t-x)^n/n! exp(-t^2) dt
    xm = mpmath.mpf(x)
    ref = 2 / mpmath.sqrt(mpmath.pi) * mpmath.quad(
        lambda t: (t - xm) ** n / mpmath.factorial(n) * mpmath.exp(xm * xm - t * t), [xm, xm + 10, mpmath.inf]
    )
    assert_allclose(specfun.scaled_ierfc(n, x), float(ref), rtol=1e-13)


def test_shapes_preserved():
    z = np.zeros((2, 3))
    assert specfun.l(z).shape == (2, 3)
    assert isinstance(specfun.l(0.5), float)


@settings(max_examples=200, deadline=None)
@given(st.floats(-37.0, 37.0))
def test_l_positive_and_increasing(z):
    assert specfun.l(z) > 0.0
    assert specfun.l_prime(z) > 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(-30.0, 30.0))
def test_l_prime_matches_finite_difference(z):
    # l varies on the scale 1/|z| for large |z|
    h = 1e-5 / max(1.0, abs(z))
    fd = (specfun.l(z + h) - specfun.l(z - h)) / (2 * h)
    assert fd == pytest.approx(specfun.l_prime(z), rel=1e-6)
