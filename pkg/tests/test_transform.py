import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_smile import (
    Smile,
    SsviParams,
    f_p,
    flat_smile,
    g_p_numeric,
    h_of_k,
    harmonic_reconstruct,
    ssvi_g_half,
    ssvi_smile,
    ssvi_v_half,
)
from harmonic_smile.errors import InvalidParameters, NonPositiveReciprocal
from harmonic_smile.transform import (
    arithmetic_mean_check,
    arithmetic_upper_bound,
    dual_smile,
    duality_checks,
    f_p_prime,
    half_skew_check,
    harmonic_function,
    normalized_smile,
)

from conftest import SSVI_RIGHT

FHALF_SSVI_05 = 0.67705205065231605317  # mpmath
K401 = np.linspace(-1, 1, 401)


def test_fp_at_zero(ssvi_right):
    v0 = ssvi_right.v(0.0)
    assert f_p(0.0, 0.5, ssvi_right) == 0.0
    assert f_p(0.0, 0.0, ssvi_right) == 0.5 * v0
    assert f_p(0.0, 1.0, ssvi_right) == -0.5 * v0
    assert f_p(0.5, 0.5, ssvi_right) == pytest.approx(FHALF_SSVI_05, rel=1e-14)


def test_fp_rejects_bad_weight(ssvi_right):
    with pytest.raises(InvalidParameters):
        f_p(0.1, 1.5, ssvi_right)


def test_h_at_zero_and_critical_point(reference_smile):
    assert h_of_k(0.0, reference_smile) == reference_smile.v(0.0)
    # critical point of the SSVI slice: phi k = -2 rho
    s = ssvi_smile(SsviParams(0.25, 3.0, 0.7))
    kc = -2 * 0.7 / 3.0
    assert abs(s.dv(kc)) < 1e-15
    assert h_of_k(kc, s) == pytest.approx(s.v(kc), rel=1e-14)


def test_h_flat():
    assert np.all(h_of_k(K401, flat_smile(0.3)) == 0.3)


def test_h_rejects_arbitrage():
    # v = 0.2 + k^2 has k v'/v > 1 once k^2 > 0.2
    bad = Smile(lambda k: 0.2 + np.asarray(k) ** 2, lambda k: 2 * np.asarray(k), lambda k: 2.0 + 0 * np.asarray(k))
    assert h_of_k(0.1, bad) > 0
    with pytest.raises(NonPositiveReciprocal) as info:
        h_of_k(1.0, bad)
    assert info.value.k == 1.0


def test_reciprocal_h_is_fhalf_derivative(reference_smile):
    k = np.linspace(-2, 2, 401)
    assert np.max(np.abs(1 / h_of_k(k, reference_smile) - f_p_prime(k, 0.5, reference_smile))) < 1e-10


def test_reconstruct_constant():
    for k in (-0.7, 0.0, 0.4):
        assert harmonic_reconstruct(k, lambda y: 0.25) == pytest.approx(0.25, rel=1e-14)
        assert arithmetic_upper_bound(k, lambda y: 0.25) == pytest.approx(0.25, rel=1e-14)


def test_reconstruct_round_trip(reference_smile):
    h = harmonic_function(reference_smile)
    rec = np.array([harmonic_reconstruct(k, h) for k in K401])
    assert np.max(np.abs(rec / reference_smile.v(K401) - 1)) < 1e-6
    assert harmonic_reconstruct(1e-9, h) == pytest.approx(h(0.0), rel=1e-8)


def test_arithmetic_upper_bound(reference_smile):
    h = harmonic_function(reference_smile)
    assert arithmetic_upper_bound(0.0, h) == reference_smile.v(0.0)
    for k in K401:
        assert reference_smile.v(k) <= arithmetic_upper_bound(k, h) + 1e-12


def test_half_skew(reference_smile):
    lhs, rhs = half_skew_check(reference_smile)
    assert abs(lhs - rhs) < 1e-7
    assert half_skew_check(flat_smile(0.2)) == (0.0, 0.0)


def test_g_half_closed_form_matches(ssvi_right):
    for z in (-2, -1, -0.5, 0.5, 1, 2):
        assert g_p_numeric(z, 0.5, ssvi_right) == pytest.approx(ssvi_g_half(z, SSVI_RIGHT), abs=1e-9)
    assert g_p_numeric(0.0, 0.5, ssvi_right) == 0.0


def test_g_half_known_value():
    assert ssvi_g_half(1.0, SsviParams(0.25, 3.0, 0.0)) == 0.625
    assert ssvi_g_half(0.0, SSVI_RIGHT) == 0.0


@given(st.floats(-50, 50).filter(lambda z: z != 0))
def test_g_half_sign(z):
    assert math.copysign(1, ssvi_g_half(z, SSVI_RIGHT)) == math.copysign(1, z)


def test_v_half_identities():
    z = np.linspace(-3, 3, 61)
    assert ssvi_v_half(0.0, SSVI_RIGHT) == pytest.approx(0.5, rel=1e-15)
    assert np.max(np.abs(z * ssvi_v_half(z, SSVI_RIGHT) - ssvi_g_half(z, SSVI_RIGHT))) < 1e-14
    th, ph, rho = SSVI_RIGHT.theta, SSVI_RIGHT.phi, SSVI_RIGHT.rho
    for sign in (1, -1):
        slope = ssvi_v_half(sign * 1e4, SSVI_RIGHT) / 1e4
        assert slope == pytest.approx(th * ph / 2 * (1 + sign * rho), rel=1e-6)


@pytest.mark.parametrize("p", [0.25, 0.5, 1.0])
def test_inverse_round_trips(reference_smile, p):
    for k in np.linspace(-1.5, 1.5, 31):
        z = f_p(k, p, reference_smile)
        assert g_p_numeric(z, p, reference_smile) == pytest.approx(k, abs=1e-10)
    for z in np.linspace(-2, 2, 21):
        assert f_p(g_p_numeric(z, p, reference_smile), p, reference_smile) == pytest.approx(z, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 1.0))
def test_inverse_property(z, p):
    s = ssvi_smile(SSVI_RIGHT)
    assert abs(f_p(g_p_numeric(z, p, s), p, s) - z) < 1e-12


def test_normalized_smile_consistency(ssvi_right):
    ns = normalized_smile(ssvi_right, 0.5)
    for z in (-1.0, 0.3, 2.0):
        assert z * ns.v(z) == pytest.approx(ns.g(z), abs=1e-12)
        assert ns.v(z) == pytest.approx(ssvi_v_half(z, SSVI_RIGHT), abs=1e-10)


def test_arithmetic_mean(ssvi_right):
    for z in (-1, -0.5, 0.5, 1):
        lhs, rhs = arithmetic_mean_check(z, ssvi_right)
        assert abs(lhs - rhs) < 1e-6
    lhs, rhs = arithmetic_mean_check(1e-6, ssvi_right)
    assert lhs == pytest.approx(ssvi_right.v(0.0), rel=1e-5)
    assert rhs == pytest.approx(ssvi_right.v(0.0), rel=1e-5)
    lhs, rhs = arithmetic_mean_check(0.8, flat_smile(0.2))
    assert lhs == pytest.approx(0.2) and rhs == pytest.approx(0.2)
    with pytest.raises(InvalidParameters):
        arithmetic_mean_check(0.0, ssvi_right)


def test_duality_symmetric_smile():
    s = ssvi_smile(SsviParams(0.3, 2.0, 0.0))
    d = dual_smile(s)
    assert np.allclose(d.v(K401), s.v(K401), rtol=1e-15)
    assert np.allclose(h_of_k(K401, d), h_of_k(K401, s), rtol=1e-14)


def test_duality_checks(ssvi_right):
    report = duality_checks(ssvi_right)
    assert report.h < 1e-10
    assert report.f_p < 1e-12
    assert report.v_p < 1e-10
    d = dual_smile(ssvi_right)
    assert np.max(np.abs(f_p(K401, 0.5, d) + f_p(-K401, 0.5, ssvi_right))) < 1e-12
