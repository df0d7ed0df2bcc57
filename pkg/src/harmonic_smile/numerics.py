"""Scalar root finding and quadrature helpers."""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence

from scipy import integrate

from .errors import BracketNotFound, QuadratureError

ScalarFn = Callable[[float], float]


def expand_bracket(
    f: ScalarFn,
    lo: float = -1.0,
    hi: float = 1.0,
    limit: float = 60.0,
    domain: tuple[float, float] = (-math.inf, math.inf),
) -> tuple[float, float]:
    """Grow ``[lo, hi]`` by doubling until ``f`` changes sign on it.

    ``f`` is assumed increasing. Each side stops at ``limit`` in absolute value
    or at the edge of ``domain``, whichever is reached first.
    """
    lo_cap = max(-limit, domain[0])
    hi_cap = min(limit, domain[1])
    lo, hi = max(lo, lo_cap), min(hi, hi_cap)
    while f(lo) > 0.0:
        if lo <= lo_cap:
            raise BracketNotFound(f"no sign change down to k = {lo:.6g}")
        lo = max(2.0 * lo if lo < 0 else lo - 1.0, lo_cap)
    while f(hi) < 0.0:
        if hi >= hi_cap:
            raise BracketNotFound(f"no sign change up to k = {hi:.6g}")
        hi = min(2.0 * hi if hi > 0 else hi + 1.0, hi_cap)
    return lo, hi


def newton_bisect(
    f: ScalarFn,
    fprime: ScalarFn,
    lo: float,
    hi: float,
    xtol: float = 1e-15,
    ftol: float = 1e-14,
    maxiter: int = 200,
) -> float:
    """Root of an increasing ``f`` on ``[lo, hi]`` by safeguarded Newton.

    Newton steps that leave the current bracket are replaced by bisection.
    Requires ``f(lo) <= 0 <= f(hi)``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo > 0.0 or fhi < 0.0:
        raise BracketNotFound(f"[{lo:.6g}, {hi:.6g}] does not bracket a root")

    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if abs(fx) <= ftol:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= xtol * max(1.0, abs(x)):
            return x
        d = fprime(x)
        x_new = x - fx / d if d > 0.0 and math.isfinite(d) else math.nan
        # fall back to bisection whenever Newton leaves the bracket
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def integrate_interval(
    f: ScalarFn,
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-12,
    limit: int = 200,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    Raises :class:`QuadratureError` on non-finite output or when QUADPACK
    reports that the requested accuracy could not be reached.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    pts = None
    if points:
        pts = sorted(p for p in points if a < p < b) or None
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(
                f, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=limit, points=pts
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc).strip().splitlines()[0]) from exc
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite integral on [{a:.6g}, {b:.6g}]")
    return sign * value
