import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_smile import (
    QuadratureConfig,
    SsviParams,
    bs_call,
    flat_smile,
    sqrt_price,
    ssvi_smile,
    ssvi_sqrt_asymptotic,
    ssvi_sqrt_quadrature,
)
from harmonic_smile.errors import ArbitrageConditionViolated, AtomAtZero, InvalidParameters
from harmonic_smile.pricing import (
    VolSwapResult,
    log_contract,
    moment_p,
    price_claim,
    vanilla_payoff,
    volswap,
    volswap_sweep,
)


def test_config_validation():
    with pytest.raises(InvalidParameters):
        QuadratureConfig(z_bound=6.0)
    with pytest.raises(InvalidParameters):
        QuadratureConfig(abs_tol=0.0)


def test_density_normalization_and_mean(ssvi_right):
    assert price_claim(lambda K: 1.0, ssvi_right) == pytest.approx(1.0, abs=1e-9)
    assert price_claim(lambda K: K, ssvi_right) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("k", [-0.4, -0.1, 0.0, 0.1, 0.4])
def test_vanilla_repricing(reference_smile, k):
    price = price_claim(vanilla_payoff(k), reference_smile, kinks=[k])
    assert abs(price - bs_call(k, reference_smile.v(k))) < 1e-7


def test_log_contract_flat():
    assert log_contract(flat_smile(0.3)) == pytest.approx(0.09, rel=1e-10)


@pytest.mark.parametrize("params", [(0.25, 3.0, 0.7), (0.25, 3.0, 0.0)])
def test_log_contract_two_routes(params):
    s = ssvi_smile(SsviParams(*params))
    assert log_contract(s) == pytest.approx(price_claim(lambda K: -2 * math.log(K), s), abs=1e-5)


def test_moments(ssvi_right):
    assert moment_p(ssvi_right, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert moment_p(ssvi_right, 0.0) == pytest.approx(1.0, abs=1e-10)
    assert moment_p(ssvi_right, 0.5) == pytest.approx(sqrt_price(ssvi_right), abs=1e-8)
    with pytest.raises(InvalidParameters):
        moment_p(ssvi_right, 1.5)


def test_moment_matches_density_route(ssvi_right):
    assert moment_p(ssvi_right, 0.3) == pytest.approx(price_claim(lambda K: K**0.3, ssvi_right), abs=1e-8)


def test_sqrt_price_flat():
    assert sqrt_price(flat_smile(0.4)) == pytest.approx(math.exp(-0.02), rel=1e-10)


def test_sqrt_routes_agree(ssvi_right):
    a = sqrt_price(ssvi_right)
    assert a <= 1.0
    assert a == pytest.approx(ssvi_sqrt_quadrature(0.25, 3.0, 0.7), abs=1e-8)
    assert a == pytest.approx(price_claim(math.sqrt, ssvi_right), abs=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.02, 0.5), st.floats(0.5, 2.0), st.floats(-0.8, 0.8))
def test_sqrt_price_jensen(theta, phi, rho):
    p = SsviParams(theta, phi, rho)
    s = ssvi_smile(p)
    q = ssvi_sqrt_quadrature(theta, phi, rho)
    assert 0 < q <= 1
    assert sqrt_price(s) == pytest.approx(q, abs=1e-7)
    assert moment_p(s, 0.5) == pytest.approx(q, abs=1e-7)


@pytest.mark.parametrize("theta", [0.01, 0.1, 0.5, 1.0])
@pytest.mark.parametrize("phi", [2.0, 4.0])
def test_zero_correlation_is_exact(theta, phi):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        q = ssvi_sqrt_quadrature(theta, phi, 0.0, strict=False)
    a = ssvi_sqrt_asymptotic(theta, phi, 0.0)
    assert abs(q - a) / a < 1e-8


def test_small_theta_limit():
    assert ssvi_sqrt_quadrature(1e-6, 3.0, 0.7) == pytest.approx(1.0, abs=1e-6)


def test_small_theta_gap():
    r = volswap(0.01, 4.0, -0.8)
    assert r.rel_gap < 1e-3


@pytest.mark.parametrize("phi, rho", [(3.0, 0.7), (4.0, -0.8), (3.0, -0.8), (4.0, 0.7)])
def test_gap_shrinks_with_theta(phi, rho):
    gaps = [r.rel_gap for r in volswap_sweep([1.0, 0.5, 0.1, 0.01], phi, rho)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_strict_mode():
    with pytest.raises(ArbitrageConditionViolated):
        ssvi_sqrt_quadrature(1.0, 4.0, 0.0)
    with pytest.warns(RuntimeWarning):
        ssvi_sqrt_quadrature(1.0, 4.0, 0.0, strict=False)


def test_atom_refused():
    s = ssvi_smile(SsviParams(1.0, 10.0, -0.1))
    with pytest.raises(AtomAtZero):
        sqrt_price(s)
    with pytest.raises(AtomAtZero):
        price_claim(lambda K: 1.0, s)


def test_result_row():
    r = volswap(0.1, 3.0, 0.7)
    assert VolSwapResult.header() == ["theta", "quadrature", "asymptotic", "rel_gap"]
    assert r.row() == (0.1, r.quadrature, r.asymptotic, r.rel_gap)
    assert np.isclose(r.rel_gap, abs(r.quadrature - r.asymptotic) / r.asymptotic)
