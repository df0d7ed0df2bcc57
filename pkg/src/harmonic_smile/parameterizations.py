"""Parametric and sampled smiles, and the SSVI maturity surface.

A :class:`Smile` carries its own derivative closures so downstream code never
re-differentiates numerically. Callables accept scalars or numpy arrays.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from os import PathLike
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from scipy.interpolate import CubicSpline

from .errors import InvalidParameters, OutOfDomain

Curve = Callable[[ArrayLike], "np.ndarray | float"]

PROBE_GRID = np.linspace(-5.0, 5.0, 2001)


def _scalarize(x: np.ndarray) -> np.ndarray | float:
    return x if np.ndim(x) else float(x)


@dataclass(frozen=True)
class Smile:
    """Total implied volatility ``k -> v(k)`` at a fixed maturity.

    ``v``, ``dv`` and ``d2v`` are the function and its first two
    log-strike derivatives. ``domain`` is the closed interval where the
    smile may be evaluated (the whole line for parametric smiles).
    """

    v: Curve
    dv: Curve
    d2v: Curve
    provenance: Literal["parametric", "sampled"] = "parametric"
    domain: tuple[float, float] = (-math.inf, math.inf)
    label: str = ""

    def w(self, k: ArrayLike) -> np.ndarray | float:
        """Total implied variance ``v(k)**2``."""
        return _scalarize(np.asarray(self.v(k)) ** 2)

    def contains(self, k: ArrayLike) -> bool:
        k = np.asarray(k, dtype=float)
        return bool(np.all((k >= self.domain[0]) & (k <= self.domain[1])))


@dataclass(frozen=True)
class SviParams:
    """Raw SVI slice ``w(k) = a + b (rho (k - m) + sqrt((k - m)^2 + sigma^2))``."""

    a: float
    b: float
    rho: float
    m: float
    sigma: float

    def __post_init__(self):
        if self.b < 0.0:
            raise InvalidParameters(f"SVI b must be >= 0, got {self.b}")
        if self.sigma <= 0.0:
            raise InvalidParameters(f"SVI sigma must be > 0, got {self.sigma}")
        if not -1.0 < self.rho < 1.0:
            raise InvalidParameters(f"SVI rho must lie in (-1, 1), got {self.rho}")

    def total_variance(self, k: ArrayLike) -> np.ndarray | float:
        x = np.asarray(k, dtype=float) - self.m
        return _scalarize(self.a + self.b * (self.rho * x + np.sqrt(x * x + self.sigma**2)))


@dataclass(frozen=True)
class SsviParams:
    """SSVI slice parameters: ATM total variance, curvature scale, correlation."""

    theta: float
    phi: float
    rho: float

    def __post_init__(self):
        if self.theta <= 0.0:
            raise InvalidParameters(f"SSVI theta must be > 0, got {self.theta}")
        if self.phi <= 0.0:
            raise InvalidParameters(f"SSVI phi must be > 0, got {self.phi}")
        if not -1.0 < self.rho < 1.0:
            raise InvalidParameters(f"SSVI rho must lie in (-1, 1), got {self.rho}")

    @property
    def min_total_variance(self) -> float:
        """``min_k w(k) = theta (1 - rho^2)``, reached at ``phi k = -2 rho``."""
        return self.theta * (1.0 - self.rho**2)

    @property
    def beta_minus(self) -> float:
        """Left-wing slope ``lim v(k)^2 / |k|`` as ``k -> -inf``."""
        return 0.5 * self.theta * self.phi * (1.0 - self.rho)

    def total_variance(self, k: ArrayLike) -> np.ndarray | float:
        return _scalarize(self.theta * _ssvi_shape(np.asarray(k, dtype=float), self.phi, self.rho)[0])


def _ssvi_shape(k: np.ndarray, phi: float, rho: float):
    """``s(k) = (1 + rho phi k + sqrt(Delta)) / 2`` and its first two derivatives."""
    u = phi * k + rho
    sq = np.sqrt(u * u + 1.0 - rho * rho)
    s = 0.5 * (1.0 + rho * phi * k + sq)
    ds = 0.5 * phi * (rho + u / sq)
    d2s = 0.5 * phi * phi * (1.0 - rho * rho) / sq**3
    return s, ds, d2s


def _sqrt_chain(w: Callable, dw: Callable, d2w: Callable) -> tuple[Curve, Curve, Curve]:
    """Derivatives of ``v = sqrt(w)`` from those of ``w``."""

    def v(k):
        return _scalarize(np.sqrt(w(np.asarray(k, dtype=float))))

    def dv(k):
        k = np.asarray(k, dtype=float)
        return _scalarize(dw(k) / (2.0 * np.sqrt(w(k))))

    def d2v(k):
        k = np.asarray(k, dtype=float)
        sv = np.sqrt(w(k))
        return _scalarize(d2w(k) / (2.0 * sv) - dw(k) ** 2 / (4.0 * sv**3))

    return v, dv, d2v


def flat_smile(c: float) -> Smile:
    """Constant total volatility ``v(k) = c``."""
    if c <= 0.0:
        raise InvalidParameters(f"flat smile level must be > 0, got {c}")

    def v(k):
        return _scalarize(np.full(np.shape(k), float(c)))

    def zero(k):
        return _scalarize(np.zeros(np.shape(k)))

    return Smile(v, zero, zero, label=f"flat({c})")


def svi_smile(params: SviParams) -> Smile:
    """Smile ``v = sqrt(w)`` of a raw SVI slice with analytic derivatives.

    Raises :class:`InvalidParameters` if ``w <= 0`` anywhere on the probe grid
    ``k in [-5, 5]`` (2001 points).
    """
    a, b, rho, m, sig = params.a, params.b, params.rho, params.m, params.sigma
    if np.min(params.total_variance(PROBE_GRID)) <= 0.0:
        raise InvalidParameters(f"SVI total variance is not positive on [-5, 5]: {params}")

    def w(k):
        x = k - m
        return a + b * (rho * x + np.sqrt(x * x + sig * sig))

    def dw(k):
        x = k - m
        return b * (rho + x / np.sqrt(x * x + sig * sig))

    def d2w(k):
        x = k - m
        return b * sig * sig / (x * x + sig * sig) ** 1.5

    return Smile(*_sqrt_chain(w, dw, d2w), label=f"svi{(a, b, rho, m, sig)}")


def ssvi_smile(params: SsviParams) -> Smile:
    """Smile of an SSVI slice, ``v = sqrt(theta * s(k))``."""
    theta, phi, rho = params.theta, params.phi, params.rho
    smile = Smile(
        *_sqrt_chain(
            lambda k: theta * _ssvi_shape(k, phi, rho)[0],
            lambda k: theta * _ssvi_shape(k, phi, rho)[1],
            lambda k: theta * _ssvi_shape(k, phi, rho)[2],
        ),
        label=f"ssvi{(theta, phi, rho)}",
    )
    return smile


def sampled_smile(knots: Iterable[tuple[float, float]]) -> Smile:
    """C2 cubic spline (not-a-knot ends) through ``(k, v)`` knots.

    Needs at least four knots with strictly increasing ``k`` and positive
    ``v``. Evaluating outside the knot range raises :class:`OutOfDomain`
    instead of extrapolating.
    """
    pts = np.asarray(list(knots), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidParameters("knots must be (k, v) pairs")
    if len(pts) < 4:
        raise InvalidParameters(f"need at least 4 knots, got {len(pts)}")
    ks, vs = pts[:, 0], pts[:, 1]
    if np.any(np.diff(ks) <= 0.0):
        raise InvalidParameters("knot abscissae must be strictly increasing")
    if np.any(vs <= 0.0):
        raise InvalidParameters("knot volatilities must be positive")

    spline = CubicSpline(ks, vs, bc_type="not-a-knot")
    lo, hi = float(ks[0]), float(ks[-1])

    def guarded(nu: int) -> Curve:
        def curve(k):
            k = np.asarray(k, dtype=float)
            if np.any((k < lo) | (k > hi)):
                raise OutOfDomain(f"k outside sampled range [{lo}, {hi}]")
            return _scalarize(spline(k, nu))

        return curve

    return Smile(
        guarded(0), guarded(1), guarded(2), provenance="sampled", domain=(lo, hi),
        label=f"sampled[{len(ks)}]",
    )


def read_smile_csv(path: str | PathLike) -> Smile:
    """Load a sampled smile from a UTF-8 CSV with header ``k,v``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["k", "v"]:
            raise InvalidParameters(f"{path}: expected header 'k,v', got {reader.fieldnames}")
        rows = [(float(r["k"]), float(r["v"])) for r in reader]
    return sampled_smile(rows)


@dataclass(frozen=True)
class Surface:
    """Total implied volatility surface ``(T, k) -> v(T, k)``, ``T > 0``.

    ``dT`` is the maturity derivative; ``dv``/``d2v`` are log-strike
    derivatives.
    """

    v: Callable[[float, ArrayLike], "np.ndarray | float"]
    dT: Callable[[float, ArrayLike], "np.ndarray | float"]
    dv: Callable[[float, ArrayLike], "np.ndarray | float"]
    d2v: Callable[[float, ArrayLike], "np.ndarray | float"]
    T_max: float = math.inf
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def check_maturity(self, T: float) -> None:
        if not T > 0.0:
            raise OutOfDomain(f"maturity must be > 0, got {T}")
        if T > self.T_max:
            raise OutOfDomain(f"maturity {T} beyond T_max = {self.T_max}")

    def slice(self, T: float) -> Smile:
        """Fixed-maturity smile ``k -> v(T, k)``."""
        self.check_maturity(T)
        return Smile(
            lambda k: self.v(T, k),
            lambda k: self.dv(T, k),
            lambda k: self.d2v(T, k),
            label=f"{self.label}@T={T}",
        )

    def implied_vol_slice(self, T: float) -> Smile:
        """Smile of ``sigma_BS(T, .) = v(T, .) / sqrt(T)``."""
        self.check_maturity(T)
        s = 1.0 / math.sqrt(T)
        return Smile(
            lambda k: s * self.v(T, k),
            lambda k: s * self.dv(T, k),
            lambda k: s * self.d2v(T, k),
            label=f"{self.label}:sigma_bs@T={T}",
        )

    def sigma_bs(self, T: float, k: ArrayLike) -> np.ndarray | float:
        self.check_maturity(T)
        return self.v(T, k) / math.sqrt(T)


def ssvi_surface(theta_rate: float, phi: float, rho: float) -> Surface:
    """SSVI surface with ATM total variance ``theta_rate * T`` and fixed ``phi, rho``.

    Total variance is linear in ``T``, so ``d_T w = w / T`` and
    ``d_T v = v / (2T)`` exactly.
    """
    if theta_rate <= 0.0:
        raise InvalidParameters(f"theta_rate must be > 0, got {theta_rate}")
    shape = SsviParams(theta_rate, phi, rho)  # validates phi, rho

    def _check(T):
        if not T > 0.0:
            raise OutOfDomain(f"maturity must be > 0, got {T}")

    def v(T, k):
        _check(T)
        s = _ssvi_shape(np.asarray(k, dtype=float), phi, rho)[0]
        return _scalarize(np.sqrt(theta_rate * T * s))

    def dT(T, k):
        return _scalarize(np.asarray(v(T, k)) / (2.0 * T))

    def dv(T, k):
        _check(T)
        s, ds, _ = _ssvi_shape(np.asarray(k, dtype=float), phi, rho)
        return _scalarize(math.sqrt(theta_rate * T) * ds / (2.0 * np.sqrt(s)))

    def d2v(T, k):
        _check(T)
        s, ds, d2s = _ssvi_shape(np.asarray(k, dtype=float), phi, rho)
        sq = np.sqrt(s)
        return _scalarize(math.sqrt(theta_rate * T) * (d2s / (2.0 * sq) - ds * ds / (4.0 * sq**3)))

    return Surface(
        v, dT, dv, d2v, label=f"ssvi_surface{(theta_rate, phi, rho)}",
        meta={"theta_rate": theta_rate, "phi": phi, "rho": rho, "params": shape},
    )


def flat_surface(s: float) -> Surface:
    """Black-Scholes surface ``v(T, k) = s sqrt(T)``."""
    if s <= 0.0:
        raise InvalidParameters(f"volatility must be > 0, got {s}")

    def _check(T):
        if not T > 0.0:
            raise OutOfDomain(f"maturity must be > 0, got {T}")

    def v(T, k):
        _check(T)
        return _scalarize(np.full(np.shape(k), s * math.sqrt(T)))

    def dT(T, k):
        _check(T)
        return _scalarize(np.full(np.shape(k), 0.5 * s / math.sqrt(T)))

    def zero(T, k):
        _check(T)
        return _scalarize(np.zeros(np.shape(k)))

    return Surface(v, dT, zero, zero, label=f"flat_surface({s})", meta={"sigma": s})
