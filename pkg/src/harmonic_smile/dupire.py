"""Dupire local volatility from a total implied volatility surface.

Normalized setting only (forward 1, no rates). The harmonic counterpart of
the implied volatility is ``Sigma(T, k) = h(T, k) / sqrt(T)`` and it relates
to the local volatility through

    Sigma(T, k) * sqrt(1 + T a(T, k) + T^2 b(T, k)) = sigma_dup(T, k)

wherever ``d_T v(T, k) > 0``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import astuple, dataclass, fields

from .errors import IdentityDomainError, NegativeVariance, NonPositiveDenominator
from .parameterizations import Surface
from .transform import h_of_k


@dataclass(frozen=True)
class _ImpliedVolJet:
    sigma: float
    d1: float
    d2: float
    dT: float


def _jet(T: float, k: float, surface: Surface) -> _ImpliedVolJet:
    """``sigma_BS`` and its derivatives from the total-vol accessors."""
    surface.check_maturity(T)
    rt = math.sqrt(T)
    v = float(surface.v(T, k))
    return _ImpliedVolJet(
        sigma=v / rt,
        d1=float(surface.dv(T, k)) / rt,
        d2=float(surface.d2v(T, k)) / rt,
        dT=float(surface.dT(T, k)) / rt - v / (2.0 * T * rt),
    )


def local_variance(T: float, k: float, surface: Surface) -> float:
    """Squared local volatility in implied-volatility form.

    Raises :class:`NonPositiveDenominator` on a butterfly violation and
    :class:`NegativeVariance` on a calendar violation; neither is clamped.
    """
    j = _jet(T, k, surface)
    num = j.sigma + 2.0 * T * j.dT
    den = (
        T * j.d2
        - 0.25 * T * T * j.sigma * j.d1 * j.d1
        + (1.0 - k * j.d1 / j.sigma) ** 2 / j.sigma
    )
    if not den > 0.0:
        raise NonPositiveDenominator(T, k, den)
    if num < 0.0:
        raise NegativeVariance(T, k, num / den)
    return num / den


def local_vol(T: float, k: float, surface: Surface) -> float:
    return math.sqrt(local_variance(T, k, surface))


def local_vol_total(T: float, k: float, surface: Surface) -> float:
    """Local volatility from total-vol derivatives:
    ``2 d_T v / (v'' - v v'^2 / 4 + (1 - k v'/v)^2 / v)``."""
    surface.check_maturity(T)
    v = float(surface.v(T, k))
    dv = float(surface.dv(T, k))
    d2v = float(surface.d2v(T, k))
    num = 2.0 * float(surface.dT(T, k))
    den = d2v - 0.25 * v * dv * dv + (1.0 - k * dv / v) ** 2 / v
    if not den > 0.0:
        raise NonPositiveDenominator(T, k, den)
    if num < 0.0:
        raise NegativeVariance(T, k, num / den)
    return math.sqrt(num / den)


def sigma_upper(T: float, k: float, surface: Surface) -> float:
    """``Sigma(T, k) = h(T, k) / sqrt(T)``, the harmonic counterpart of ``sigma_BS``."""
    return float(h_of_k(k, surface.slice(T))) / math.sqrt(T)


def ab_coefficients(T: float, k: float, surface: Surface) -> tuple[float, float]:
    j = _jet(T, k, surface)
    s2 = local_variance(T, k, surface)
    a = 2.0 * j.dT / j.sigma - (j.d2 / j.sigma) * s2
    b = 0.25 * j.d1 * j.d1 * s2
    return a, b


def sigma_dupire_identity_residual(T: float, k: float, surface: Surface) -> float:
    """``Sigma * sqrt(1 + T a + T^2 b) - sigma_dup``; vanishes where ``d_T v > 0``."""
    if not float(surface.dT(T, k)) > 0.0:
        raise IdentityDomainError(f"d_T v <= 0 at T = {T}, k = {k}")
    a, b = ab_coefficients(T, k, surface)
    scale = 1.0 + T * a + T * T * b
    if not scale > 0.0:
        raise IdentityDomainError(f"1 + T a + T^2 b = {scale:.6g} <= 0 at T = {T}, k = {k}")
    return sigma_upper(T, k, surface) * math.sqrt(scale) - local_vol(T, k, surface)


@dataclass(frozen=True)
class LocalVolPoint:
    T: float
    k: float
    sigma_bs: float
    sigma_dup: float
    sigma_upper: float
    a: float
    b: float
    residual: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> tuple[float, ...]:
        return astuple(self)


def local_vol_point(T: float, k: float, surface: Surface) -> LocalVolPoint:
    a, b = ab_coefficients(T, k, surface)
    return LocalVolPoint(
        T=T,
        k=k,
        sigma_bs=float(surface.sigma_bs(T, k)),
        sigma_dup=local_vol(T, k, surface),
        sigma_upper=sigma_upper(T, k, surface),
        a=a,
        b=b,
        residual=sigma_dupire_identity_residual(T, k, surface),
    )


def dupire_table(maturities: Iterable[float], ks: Iterable[float], surface: Surface) -> list[LocalVolPoint]:
    ks = [float(k) for k in ks]
    return [local_vol_point(float(T), k, surface) for T in maturities for k in ks]
