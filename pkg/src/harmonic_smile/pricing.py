"""Model-free pricing of European claims on ``X`` from its smile.

Two routes are provided. The density route integrates a payoff against
``d^2 C / dK^2``. The normalized route integrates Gaussian-weighted
functions of ``v_p(z)`` and needs no derivatives of the smile. For an SSVI
smile the square-root claim (the volatility-swap fair strike when ``X`` is
realized variance) reduces to a one-dimensional integral ``I(theta, phi, rho)``
with an explicit small-``theta`` asymptotic.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Iterable, Sequence
from dataclasses import astuple, dataclass, fields

from .arbitrage import check_ssvi_slice, mass_at_zero
from .blackscholes import density_from_smile, norm_cdf, norm_pdf
from .errors import ArbitrageConditionViolated, AtomAtZero, InvalidParameters
from .numerics import integrate_interval
from .parameterizations import Smile, SsviParams
from .transform import g_p_numeric, normalized_smile


@dataclass(frozen=True)
class QuadratureConfig:
    """Truncation and tolerance settings shared by every integral here.

    ``max_depth`` caps the number of adaptive subintervals; ``k_limit`` is
    the largest ``|k|`` the inverse transforms may search. Reaching
    ``|z| = 12`` can take ``|k|`` well beyond 60 (about 92 for
    ``SSVI(0.25, 3, 0.7)``), hence the generous default.
    """

    z_bound: float = 12.0
    max_depth: int = 200
    abs_tol: float = 1e-10
    k_limit: float = 1e4

    def __post_init__(self):
        if self.z_bound < 8.0:
            raise InvalidParameters(f"z_bound must be >= 8, got {self.z_bound}")
        if self.max_depth < 1 or self.abs_tol <= 0.0:
            raise InvalidParameters("max_depth and abs_tol must be positive")


DEFAULT_CONFIG = QuadratureConfig()


def _require_no_atom(smile: Smile) -> None:
    tail = mass_at_zero(smile)
    if tail.mass > 0.0:
        raise AtomAtZero(
            f"left-wing slope {tail.beta_minus:.4g} >= 2 leaves an atom of mass {tail.mass:.3g} at zero"
        )


def _gaussian_integral(g: Callable[[float], float], config: QuadratureConfig) -> float:
    """``int g(z) phi(z) dz`` over ``[-z_bound, z_bound]``."""
    zb = config.z_bound
    return integrate_interval(
        lambda z: g(z) * float(norm_pdf(z)), -zb, zb,
        abs_tol=config.abs_tol, limit=config.max_depth, points=[0.0],
    )


def price_claim(
    payoff: Callable[[float], float],
    smile: Smile,
    config: QuadratureConfig = DEFAULT_CONFIG,
    kinks: Iterable[float] = (),
) -> float:
    """``E[payoff(X)] = int_0^inf payoff(K) f_X(K) dK`` by quadrature in ``k = log K``.

    The ``k``-range runs from ``g_0(-z_bound)`` to ``g_1(z_bound)``, outside
    of which both ``K f_X(K)`` and ``f_X(K)`` carry Gaussian weight below
    ``phi(z_bound)``. ``kinks`` are log-strikes where the payoff is not
    smooth. Refuses smiles whose law may have an atom at zero.
    """
    _require_no_atom(smile)
    k_lo = g_p_numeric(-config.z_bound, 0.0, smile, config.k_limit)
    k_hi = g_p_numeric(config.z_bound, 1.0, smile, config.k_limit)

    def integrand(k: float) -> float:
        return payoff(math.exp(k)) * float(density_from_smile(k, smile)) * math.exp(k)

    return integrate_interval(
        integrand, k_lo, k_hi, abs_tol=config.abs_tol,
        limit=config.max_depth, points=[0.0, *kinks],
    )


def log_contract(smile: Smile, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``E[-2 log X] = int v_0(z)^2 phi(z) dz``."""
    _require_no_atom(smile)
    v0 = normalized_smile(smile, 0.0, config.k_limit)
    return _gaussian_integral(lambda z: v0.v(z) ** 2, config)


def moment_p(smile: Smile, p: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``E[X^p] = int exp(p(p-1) v_p(z)^2 / 2) phi(z) dz`` for ``p`` in ``[0, 1]``."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameters(f"p must lie in [0, 1], got {p}")
    coef = 0.5 * p * (p - 1.0)
    if coef == 0.0:
        return 1.0 - 2.0 * float(norm_cdf(-config.z_bound))
    _require_no_atom(smile)
    vp = normalized_smile(smile, p, config.k_limit)
    return _gaussian_integral(lambda z: math.exp(coef * vp.v(z) ** 2), config)


def sqrt_price(smile: Smile, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``E[sqrt X] = int exp(-v_{1/2}(z)^2 / 8) phi(z) dz``."""
    _require_no_atom(smile)
    vh = normalized_smile(smile, 0.5, config.k_limit)
    return _gaussian_integral(lambda z: math.exp(-0.125 * vh.v(z) ** 2), config)


def _a_theta(theta: float, phi: float, rho: float) -> float:
    return (1.0 + rho * rho) / 8.0 + 2.0 / (theta * theta * phi * phi)


def ssvi_sqrt_quadrature(
    theta: float,
    phi: float,
    rho: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
    strict: bool = True,
) -> float:
    """``E[sqrt X]`` for an SSVI smile via ``(2 e^{-theta/8} / (theta phi)) I``,

    where ``I = int exp(-A y^2 - rho y sqrt(y^2 + theta) / 4) dy / sqrt(2 pi)``
    and ``A = (1 + rho^2)/8 + 2/(theta phi)^2``.

    With ``strict=True`` the SSVI slice conditions must hold. With
    ``strict=False`` the integral is evaluated anyway (it converges for all
    admissible parameters) with a ``RuntimeWarning``; the value is then no
    longer a genuine expectation.
    """
    params = SsviParams(theta, phi, rho)
    if not check_ssvi_slice(params):
        msg = f"SSVI slice conditions fail for theta={theta}, phi={phi}, rho={rho}"
        if strict:
            raise ArbitrageConditionViolated(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    A = _a_theta(theta, phi, rho)
    # slowest tail decay is exp(-(A - |rho|/4) y^2)
    half_width = config.z_bound / math.sqrt(2.0 * (A - 0.25 * abs(rho)))
    norm = 1.0 / math.sqrt(2.0 * math.pi)

    def integrand(y: float) -> float:
        return norm * math.exp(-A * y * y - 0.25 * rho * y * math.sqrt(y * y + theta))

    scale = 1.0 / math.sqrt(2.0 * A)
    integral = integrate_interval(
        integrand, -half_width, half_width, abs_tol=config.abs_tol * scale,
        limit=config.max_depth, points=[0.0],
    )
    return 2.0 * math.exp(-theta / 8.0) / (theta * phi) * integral


def ssvi_sqrt_asymptotic(theta: float, phi: float, rho: float) -> float:
    """Small-``theta`` approximation ``e^{-theta/8} / sqrt(1 + (1+rho^2) theta^2 phi^2 / 16)``.

    Exact when ``rho = 0``.
    """
    SsviParams(theta, phi, rho)
    return math.exp(-theta / 8.0) / math.sqrt(1.0 + (1.0 + rho * rho) * (theta * phi) ** 2 / 16.0)


@dataclass(frozen=True)
class VolSwapResult:
    theta: float
    quadrature: float
    asymptotic: float
    rel_gap: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> tuple[float, ...]:
        return astuple(self)


def volswap(
    theta: float,
    phi: float,
    rho: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
    strict: bool = True,
) -> VolSwapResult:
    q = ssvi_sqrt_quadrature(theta, phi, rho, config, strict=strict)
    a = ssvi_sqrt_asymptotic(theta, phi, rho)
    return VolSwapResult(theta, q, a, abs(q - a) / a)


def volswap_sweep(
    thetas: Sequence[float],
    phi: float,
    rho: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
    strict: bool = False,
) -> list[VolSwapResult]:
    """Quadrature vs asymptotic along a list of ``theta`` values.

    Defaults to ``strict=False`` because a sweep typically runs past the
    region where the slice conditions hold.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return [volswap(float(t), phi, rho, config, strict=strict) for t in thetas]


def vanilla_payoff(k_strike: float) -> Callable[[float], float]:
    K = math.exp(k_strike)
    return lambda x: max(x - K, 0.0)
