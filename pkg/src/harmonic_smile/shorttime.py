"""Short-maturity behaviour of the normalized implied and local volatilities.

Along ``z / sqrt(T)`` the normalized implied volatility and the normalized
local volatility both converge as ``T -> 0``, and in the limit the former is
the running average of the latter over ``[0, z]``. The functions here
evaluate the finite-``T`` quantities so that convergence can be measured.

The limit theorem also asks for bounded ``d_T sigma_BS`` and
``d_kk sigma_BS`` as ``T -> 0``; this is not checked here. The SSVI surface
with ``theta_T = theta * T`` satisfies it by construction.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass

from .dupire import local_vol
from .errors import InvalidParameters
from .numerics import integrate_interval
from .parameterizations import Surface
from .transform import g_p_numeric

QUAD_ABS_TOL = 1e-8


def rescaled_g(T: float, z: float, surface: Surface) -> float:
    """Solve ``k / sigma_BS(T, k) = z``, i.e. ``g_{1/2}(T, z / sqrt(T))``."""
    if z == 0.0:
        surface.check_maturity(T)
        return 0.0
    return g_p_numeric(z, 0.5, surface.implied_vol_slice(T))


def rescaled_sigma_half(T: float, z: float, surface: Surface) -> float:
    """``sigma_{1/2}(T, z / sqrt(T)) = sigma_BS(T, rescaled_g(T, z))``."""
    return float(surface.sigma_bs(T, rescaled_g(T, z, surface)))


def rescaled_dupire_half(T: float, z: float, surface: Surface) -> float:
    """``sigma_{Dup,1/2}(T, z / sqrt(T)) = sigma_Dup(T, rescaled_g(T, z))``."""
    return local_vol(T, rescaled_g(T, z, surface), surface)


def sigma_half(T: float, z: float, surface: Surface) -> float:
    """Unrescaled ``sigma_{1/2}(T, z) = sigma_BS(T, g_{1/2}(T, z))``."""
    k = g_p_numeric(z, 0.5, surface.slice(T)) if z != 0.0 else 0.0
    return float(surface.sigma_bs(T, k))


def _residual(T: float, z: float, surface: Surface, abs_tol: float) -> float:
    cache: dict[float, float] = {}

    def dup(y: float) -> float:
        if y not in cache:
            cache[y] = rescaled_dupire_half(T, y, surface)
        return cache[y]

    avg = integrate_interval(dup, 0.0, z, abs_tol=abs_tol) / z
    return rescaled_sigma_half(T, z, surface) - avg


def arithmetic_mean_limit_residual(
    z: float,
    surface: Surface,
    T_sequence: Sequence[float],
    abs_tol: float = QUAD_ABS_TOL,
) -> list[float]:
    """For each ``T``: ``sigma_{1/2}(T, z/sqrt T) - (1/z) int_0^z sigma_{Dup,1/2}(T, y/sqrt T) dy``.

    The residual vanishes in the limit ``T -> 0``; no rate is implied.
    """
    if z == 0.0:
        raise InvalidParameters("z must be nonzero")
    Ts = [float(T) for T in T_sequence]
    if any(b >= a for a, b in zip(Ts, Ts[1:])):
        raise InvalidParameters("T_sequence must be strictly decreasing")
    return [_residual(T, z, surface, abs_tol) for T in Ts]


@dataclass(frozen=True)
class RescaledPoint:
    T: float
    z: float
    g_bar: float
    sigma_half: float
    sigma_dup_half: float

    def row(self) -> tuple[float, ...]:
        return astuple(self)


def rescaled_point(T: float, z: float, surface: Surface) -> RescaledPoint:
    k = rescaled_g(T, z, surface)
    return RescaledPoint(
        T=T,
        z=z,
        g_bar=k,
        sigma_half=float(surface.sigma_bs(T, k)),
        sigma_dup_half=local_vol(T, k, surface),
    )


TABLE_HEADER = ["T", "z", "sigma_half", "sigma_dup_half", "residual"]


def normalized_table(
    surface: Surface,
    maturities: Iterable[float],
    zs: Iterable[float],
    abs_tol: float = QUAD_ABS_TOL,
) -> list[tuple[float, float, float, float, float]]:
    """Rows ``(T, z, sigma_half, sigma_dup_half, residual)`` in rescaled coordinates.

    ``residual`` is ``nan`` at ``z = 0``, where the running average is not defined.
    """
    rows = []
    zs = [float(z) for z in zs]
    for T in maturities:
        T = float(T)
        for z in zs:
            pt = rescaled_point(T, z, surface)
            res = _residual(T, z, surface, abs_tol) if z != 0.0 else float("nan")
            rows.append((T, z, pt.sigma_half, pt.sigma_dup_half, res))
    return rows
