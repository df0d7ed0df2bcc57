"""Static no-arbitrage diagnostics for a single-maturity smile."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .blackscholes import norm_cdf
from .errors import OutOfDomain
from .parameterizations import Smile, SsviParams
from .transform import f_p, f_p_prime

NONNEG_TOL = 1e-10
DEFAULT_GRID = np.linspace(-3.0, 3.0, 2001)
K_FAR = -30.0


def butterfly_functional(k: ArrayLike, smile: Smile) -> np.ndarray | float:
    """``v'' - (v/4) v'^2 + (1/v)(1 - k v'/v)^2``.

    Nonnegative at ``k`` iff the call price is locally convex in strike at
    ``K = e^k``.
    """
    k = np.asarray(k, dtype=float)
    v, dv, d2v = smile.v(k), smile.dv(k), smile.d2v(k)
    out = d2v - 0.25 * v * dv * dv + (1.0 - k * dv / v) ** 2 / v
    return out if np.ndim(out) else float(out)


def butterfly_functional_fprime(k: ArrayLike, smile: Smile) -> np.ndarray | float:
    """Same quantity written as ``v'' + v f0' f1'``."""
    k = np.asarray(k, dtype=float)
    out = smile.d2v(k) + smile.v(k) * f_p_prime(k, 0.0, smile) * f_p_prime(k, 1.0, smile)
    return out if np.ndim(out) else float(out)


def fp_derivative_min(smile: Smile, p: float, grid: ArrayLike = DEFAULT_GRID) -> float:
    """Grid minimum of ``d/dk f_p``; for ``p = 1/2`` this is ``min 1/h``."""
    grid = np.asarray(grid, dtype=float)
    if not smile.contains(grid):
        raise OutOfDomain(f"grid leaves the smile domain {smile.domain}")
    return float(np.min(f_p_prime(grid, p, smile)))


def check_ssvi_slice(params: SsviParams) -> bool:
    """Sufficient SSVI slice conditions ``theta phi (1+|rho|) < 4`` and
    ``theta phi^2 (1+|rho|) <= 4``."""
    c = 1.0 + abs(params.rho)
    return params.theta * params.phi * c < 4.0 and params.theta * params.phi**2 * c <= 4.0


class TailMass(NamedTuple):
    mass: float
    beta_minus: float


def mass_at_zero(smile: Smile, k_far: float = K_FAR) -> TailMass:
    """Estimate ``P(X = 0) = N(lim_{k -> -inf} f0(k))`` from ``k_far``.

    Also returns the left-wing slope estimate ``v(k_far)^2 / |k_far|``.
    A slope below 2 rules out an atom, in which case the mass is exactly 0.
    """
    if k_far > -10.0:
        raise ValueError(f"k_far must be <= -10, got {k_far}")
    if not smile.contains(k_far):
        raise OutOfDomain(f"smile not evaluable at k_far = {k_far}")
    beta = float(smile.v(k_far)) ** 2 / abs(k_far)
    if beta < 2.0:
        return TailMass(0.0, beta)
    return TailMass(float(norm_cdf(f_p(k_far, 0.0, smile))), beta)


@dataclass(frozen=True)
class DiagnosticsReport:
    butterfly_min: float
    f0_prime_min: float
    f1_prime_min: float
    fhalf_prime_min: float
    mass_at_zero: float
    beta_minus: float
    passed: bool

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> list[float | bool]:
        return list(asdict(self).values())


def diagnose(
    smile: Smile,
    grid: ArrayLike = DEFAULT_GRID,
    k_far: float = K_FAR,
    tol: float = NONNEG_TOL,
) -> DiagnosticsReport:
    """Run every single-slice check on ``grid``.

    ``passed`` requires a nonnegative butterfly functional (up to ``tol``),
    strictly increasing ``f0``, ``f1`` and ``f_{1/2}`` on the grid, and no
    atom at zero. Positivity of ``1/h`` alone is only necessary.

    Sampled smiles that do not reach ``k_far`` report ``nan`` for the tail
    fields, and the atom check is skipped.
    """
    grid = np.asarray(grid, dtype=float)
    if not smile.contains(grid):
        raise OutOfDomain(f"grid leaves the smile domain {smile.domain}")
    bf = float(np.min(butterfly_functional(grid, smile)))
    f0, f1, fh = (fp_derivative_min(smile, p, grid) for p in (0.0, 1.0, 0.5))
    if smile.contains(k_far):
        tail = mass_at_zero(smile, k_far)
    else:
        # tail of a sampled smile is unknown; it is not extrapolated
        tail = TailMass(float("nan"), float("nan"))
    passed = bf >= -tol and f0 > 0.0 and f1 > 0.0 and fh > 0.0 and not tail.mass > 0.0
    return DiagnosticsReport(bf, f0, f1, fh, tail.mass, tail.beta_minus, passed)
