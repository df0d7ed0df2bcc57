"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SmileError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameters(SmileError, ValueError):
    """Parameter set violates its documented invariants."""


class OutOfDomain(SmileError, ValueError):
    """Evaluation outside the domain where an object is defined."""


class NonPositiveReciprocal(SmileError):
    """``d/dk (k / v(k))`` is not positive: the smile is not arbitrage-free."""

    def __init__(self, k: float, value: float):
        self.k = float(k)
        self.value = float(value)
        super().__init__(f"d/dk (k/v) = {self.value:.6g} <= 0 at k = {self.k:.6g}")


class BracketNotFound(SmileError):
    """No sign change found while expanding a root bracket."""


class NegativeVariance(SmileError):
    """Negative local variance (calendar-spread violation)."""

    def __init__(self, T: float, k: float, value: float):
        self.T, self.k, self.value = float(T), float(k), float(value)
        super().__init__(
            f"negative local variance {self.value:.6g} at T = {self.T:.6g}, k = {self.k:.6g}"
        )


class NonPositiveDenominator(SmileError):
    """Dupire denominator <= 0 (butterfly violation)."""

    def __init__(self, T: float, k: float, value: float):
        self.T, self.k, self.value = float(T), float(k), float(value)
        super().__init__(
            f"Dupire denominator {self.value:.6g} <= 0 at T = {self.T:.6g}, k = {self.k:.6g}"
        )


class IdentityDomainError(SmileError):
    """``1 + T a + T^2 b <= 0``; the local-vol identity cannot be evaluated."""


class AtomAtZero(SmileError):
    """The implied law of X has (or may have) an atom at zero."""


class ArbitrageConditionViolated(SmileError):
    """Sufficient SSVI no-arbitrage conditions are not satisfied."""


class QuadratureError(SmileError):
    """Numerical integration failed (non-finite integrand or no convergence)."""
