"""Normalized Black-Scholes primitives.

Everything here lives in the normalized setting: forward ``F = 1``, no
discounting, log-moneyness ``k = log K`` and total volatility
``v = sigma * sqrt(T)``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import ndtr

from .errors import InvalidParameters

if TYPE_CHECKING:
    from .parameterizations import Smile

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def norm_cdf(x: ArrayLike) -> np.ndarray | float:
    """Standard Gaussian cdf (erfc-based, absolute error below 1e-16)."""
    return ndtr(x)


def norm_pdf(x: ArrayLike) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


class DPair(NamedTuple):
    d0: float
    d1: float


def d_pair(k: float, v: float) -> DPair:
    """Return ``(d0, d1) = (-k/v - v/2, -k/v + v/2)``; requires ``v > 0``."""
    if not v > 0.0:
        raise InvalidParameters(f"total volatility must be positive, got {v!r}")
    return DPair(-k / v - 0.5 * v, -k / v + 0.5 * v)


def bs_call(k: ArrayLike, v: ArrayLike) -> np.ndarray | float:
    """Normalized call price ``N(d1) - e^k N(d0)``.

    The ``v = 0`` case is the intrinsic value ``(1 - e^k)^+``, handled as an
    explicit branch. Broadcasts over ``k`` and ``v``.

    >>> round(float(bs_call(0.0, 0.2)), 12)
    0.079655674554
    """
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(v < 0.0):
        raise InvalidParameters("total volatility must be nonnegative")
    k, v = np.broadcast_arrays(k, v)
    out = np.maximum(1.0 - np.exp(k), 0.0)
    pos = v > 0.0
    if np.any(pos):
        kp, vp = k[pos], v[pos]
        d0 = -kp / vp - 0.5 * vp
        d1 = d0 + vp
        out = np.array(out, copy=True)
        out[pos] = ndtr(d1) - np.exp(kp) * ndtr(d0)
    return out if out.ndim else float(out)


def density_from_smile(k: ArrayLike, smile: Smile) -> np.ndarray | float:
    """Risk-neutral density ``d^2 C / dK^2`` at ``K = e^k`` (forward 1).

    Uses ``e^{-k} phi(f0(k)) (v'' + v f0' f1')`` with
    ``f0 = k/v + v/2`` and ``f1 = k/v - v/2``.
    """
    k = np.asarray(k, dtype=float)
    v, dv, d2v = smile.v(k), smile.dv(k), smile.d2v(k)
    core = (1.0 - k * dv / v) / v
    f0p = core + 0.5 * dv
    f1p = core - 0.5 * dv
    f0 = k / v + 0.5 * v
    out = np.exp(-k) * norm_pdf(f0) * (d2v + v * f0p * f1p)
    return out if np.ndim(out) else float(out)
