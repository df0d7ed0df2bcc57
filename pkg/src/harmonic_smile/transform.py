"""Log-strike transforms ``f_p``, the harmonic function ``h`` and their inverses.

For a smile ``v`` the maps are ``f_p(k) = k/v(k) + (1/2 - p) v(k)``. The
midpoint map ``f_{1/2}(k) = k/v(k)`` has derivative ``1/h(k)``, which makes
``v`` the harmonic mean of ``h`` on ``[0, k]`` and ``v_{1/2}`` the
arithmetic mean of ``h o g_{1/2}`` on ``[0, z]``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import AtomAtZero, InvalidParameters, NonPositiveReciprocal
from .numerics import expand_bracket, integrate_interval, newton_bisect
from .parameterizations import Smile, SsviParams

QUAD_ABS_TOL = 1e-10
BRACKET_LIMIT = 60.0


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameters(f"p must lie in [0, 1], got {p}")


def f_p(k: ArrayLike, p: float, smile: Smile) -> np.ndarray | float:
    """``k/v(k) + (1/2 - p) v(k)``; ``f_0 = -d_0``, ``f_1 = -d_1``."""
    _check_p(p)
    k = np.asarray(k, dtype=float)
    v = smile.v(k)
    out = k / v + (0.5 - p) * v
    return out if np.ndim(out) else float(out)


def f_p_prime(k: ArrayLike, p: float, smile: Smile) -> np.ndarray | float:
    """Analytic derivative of :func:`f_p` in ``k``."""
    _check_p(p)
    k = np.asarray(k, dtype=float)
    v, dv = smile.v(k), smile.dv(k)
    out = (1.0 - k * dv / v) / v + (0.5 - p) * dv
    return out if np.ndim(out) else float(out)


def h_of_k(k: ArrayLike, smile: Smile) -> np.ndarray | float:
    """Harmonic function ``h = (d/dk (k/v))^{-1} = v / (1 - k v'/v)``.

    Raises :class:`NonPositiveReciprocal` where ``1 - k v'/v <= 0``, i.e.
    where ``v`` cannot be arbitrage-free. At ``k = 0`` this returns ``v(0)``
    exactly.
    """
    k = np.asarray(k, dtype=float)
    v, dv = smile.v(k), smile.dv(k)
    bracket = 1.0 - k * dv / v
    bad = ~(bracket > 0.0)
    if np.any(bad):
        i = np.flatnonzero(np.atleast_1d(bad))[0]
        raise NonPositiveReciprocal(np.atleast_1d(k)[i], np.atleast_1d(bracket / v)[i])
    out = v / bracket
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class HarmonicFunction:
    """``h`` attached to its source smile (when there is one)."""

    h: Callable[[ArrayLike], "np.ndarray | float"]
    smile: Smile | None = None

    def __call__(self, k):
        return self.h(k)


def harmonic_function(smile: Smile) -> HarmonicFunction:
    return HarmonicFunction(lambda k: h_of_k(k, smile), smile)


def harmonic_reconstruct(k: float, h: HarmonicFunction | Callable, abs_tol: float = QUAD_ABS_TOL) -> float:
    """Harmonic mean of ``h`` over ``[0, k]``: ``[(1/k) int_0^k dy / h(y)]^{-1}``."""
    if k == 0.0:
        return float(h(0.0))
    integral = integrate_interval(lambda y: 1.0 / h(y), 0.0, k, abs_tol=abs_tol)
    return k / integral


def arithmetic_upper_bound(k: float, h: HarmonicFunction | Callable, abs_tol: float = QUAD_ABS_TOL) -> float:
    """Arithmetic mean ``M(k) = (1/k) int_0^k h``; ``M(0) = h(0) = v(0)``.

    Dominates the harmonic mean, hence ``v(k) <= M(k)``.
    """
    if k == 0.0:
        return float(h(0.0))
    return integrate_interval(h, 0.0, k, abs_tol=abs_tol) / k


def half_skew_check(smile: Smile, step: float = 1e-4) -> tuple[float, float]:
    """``(v'(0), h'(0) / 2)`` with ``h'(0)`` from a central difference."""
    hp = (h_of_k(step, smile) - h_of_k(-step, smile)) / (2.0 * step)
    return float(smile.dv(0.0)), 0.5 * hp


def g_p_numeric(
    z: float,
    p: float,
    smile: Smile,
    k_limit: float = BRACKET_LIMIT,
    ftol: float = 1e-13,
) -> float:
    """Inverse of :func:`f_p`: the unique ``k`` with ``f_p(k) = z``.

    The bracket starts at ``[-1, 1]`` and doubles up to ``|k| = k_limit``
    (clipped to the smile domain), then a safeguarded Newton iteration with
    the analytic ``f_p'`` converges to ``|f_p(k) - z| < ftol``.

    For ``p = 0`` the image of ``f_0`` is bounded below by the inverse normal
    cdf of the mass at zero, so small enough ``z`` raise
    :class:`~harmonic_smile.errors.BracketNotFound`.
    """
    _check_p(p)
    if p == 0.5 and z == 0.0:
        return 0.0

    def residual(k):
        return f_p(k, p, smile) - z

    lo, hi = expand_bracket(residual, -1.0, 1.0, limit=k_limit, domain=smile.domain)
    return newton_bisect(residual, lambda k: f_p_prime(k, p, smile), lo, hi, ftol=ftol)


@dataclass(frozen=True)
class NormalizedSmile:
    """Smile in the ``z = f_p(k)`` coordinate: ``v_p(z) = v(g_p(z))``."""

    smile: Smile
    p: float
    k_limit: float = BRACKET_LIMIT

    def g(self, z: float) -> float:
        return g_p_numeric(z, self.p, self.smile, self.k_limit)

    def v(self, z: float) -> float:
        return float(self.smile.v(self.g(z)))

    def h(self, z: float) -> float:
        """``h_p(z) = h(g_p(z))``."""
        return float(h_of_k(self.g(z), self.smile))


def normalized_smile(smile: Smile, p: float = 0.5, k_limit: float = BRACKET_LIMIT) -> NormalizedSmile:
    _check_p(p)
    return NormalizedSmile(smile, p, k_limit)


def ssvi_g_half(z: ArrayLike, params: SsviParams) -> np.ndarray | float:
    """Closed-form inverse of ``k -> k/v(k)`` for an SSVI slice."""
    z = np.asarray(z, dtype=float)
    th, ph, rho = params.theta, params.phi, params.rho
    out = 0.5 * (th * rho * ph * z * z + z * np.sqrt(th * th * ph * ph * z * z + 4.0 * th))
    return out if np.ndim(out) else float(out)


def ssvi_v_half(z: ArrayLike, params: SsviParams) -> np.ndarray | float:
    """Closed-form 1/2-normalized SSVI volatility; ``z v_{1/2}(z) = g_{1/2}(z)``.

    Grows like ``(theta phi / 2)(1 +- rho) |z|`` as ``z -> +-inf``.
    """
    z = np.asarray(z, dtype=float)
    th, ph, rho = params.theta, params.phi, params.rho
    out = 0.5 * (th * rho * ph * z + np.sqrt(th * th * ph * ph * z * z + 4.0 * th))
    return out if np.ndim(out) else float(out)


def arithmetic_mean_check(z: float, smile: Smile, abs_tol: float = QUAD_ABS_TOL) -> tuple[float, float]:
    """``(v_{1/2}(z), (1/z) int_0^z h(g_{1/2}(y)) dy)``; the two must agree."""
    if z == 0.0:
        raise InvalidParameters("z must be nonzero")
    ns = normalized_smile(smile, 0.5)
    lhs = ns.v(z)
    rhs = integrate_interval(ns.h, 0.0, z, abs_tol=abs_tol) / z
    return lhs, rhs


def dual_smile(smile: Smile) -> Smile:
    """Mirror ``v_hat(k) = v(-k)`` of the put-call duality."""
    lo, hi = smile.domain
    return Smile(
        lambda k: smile.v(-np.asarray(k, dtype=float)),
        lambda k: -smile.dv(-np.asarray(k, dtype=float)),
        lambda k: smile.d2v(-np.asarray(k, dtype=float)),
        provenance=smile.provenance,
        domain=(-hi, -lo),
        label=f"dual({smile.label})",
    )


@dataclass(frozen=True)
class DualityReport:
    """Maximum absolute deviations of the duality relations on a grid."""

    f_p: float
    v_p: float
    h: float

    @property
    def worst(self) -> float:
        return max(self.f_p, self.v_p, self.h)


def duality_checks(
    smile: Smile,
    grid: ArrayLike | None = None,
    ps: tuple[float, ...] = (0.25, 0.5, 0.75),
) -> DualityReport:
    """Check ``f_hat_p(k) = -f_{1-p}(-k)``, ``v_hat_p(z) = v_{1-p}(-z)`` and
    ``h_hat(k) = h(-k)``.

    The duality needs ``P(X = 0) = 0``; an atom raises :class:`AtomAtZero`.
    """
    from .arbitrage import K_FAR, mass_at_zero

    if smile.contains(K_FAR) and mass_at_zero(smile, K_FAR).mass > 0.0:
        raise AtomAtZero("duality requires P(X = 0) = 0")
    grid = np.linspace(-1.0, 1.0, 41) if grid is None else np.asarray(grid, dtype=float)
    dual = dual_smile(smile)
    f_err = max(
        float(np.max(np.abs(f_p(grid, p, dual) + f_p(-grid, 1.0 - p, smile)))) for p in ps
    )
    v_err = 0.0
    for p in ps:
        nd, ns = normalized_smile(dual, p), normalized_smile(smile, 1.0 - p)
        for z in grid:
            v_err = max(v_err, abs(nd.v(z) - ns.v(-z)))
    h_err = float(np.max(np.abs(h_of_k(grid, dual) - h_of_k(-grid, smile))))
    return DualityReport(f_err, v_err, h_err)


def smile_table(smile: Smile, grid: ArrayLike) -> list[tuple[float, float, float]]:
    """Rows ``(k, v(k), h(k))``."""
    grid = np.asarray(grid, dtype=float)
    return list(zip(grid.tolist(), np.asarray(smile.v(grid)).tolist(), np.asarray(h_of_k(grid, smile)).tolist()))


def normalized_table(smile: Smile, grid: ArrayLike) -> list[tuple[float, float]]:
    """Rows ``(z, v_{1/2}(z))`` by numeric inversion."""
    ns = normalized_smile(smile, 0.5)
    return [(float(z), ns.v(float(z))) for z in np.asarray(grid, dtype=float)]
