"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: usage problems exit 1, resource and
exponent-cap conditions exit 2, internal inconsistencies exit 3.
"""

from __future__ import annotations


class FibDensError(Exception):
    """Base class for all errors raised by fibdens."""


class InvalidArgumentError(FibDensError, ValueError):
    pass


class UnsupportedError(FibDensError, ValueError):
    """Valid input outside what a routine handles (e.g. the ramified prime 5)."""


class DomainError(FibDensError, ValueError):
    """A power series was evaluated outside its disc of convergence."""


class PrecisionError(FibDensError):
    """Not enough p-adic digits to deliver the requested precision."""


class NoConvergenceError(FibDensError):
    """Hensel precondition |f(y0)| < |f'(y0)|^2 fails."""

    def __init__(self, f_valuation, fprime_valuation, p):
        self.f_valuation = f_valuation
        self.fprime_valuation = fprime_valuation
        self.p = p
        super().__init__(
            f"Hensel precondition fails: |f(y0)|_p = {p}^-{f_valuation}, "
            f"|f'(y0)|_p = {p}^-{fprime_valuation}"
        )


class ResourceError(FibDensError):
    """Requested work exceeds a configured budget."""

    def __init__(self, message, required=None):
        self.required = required
        super().__init__(message)


class ExponentCapError(FibDensError):
    """Wall exponent at least the cap: a Wall-Sun-Sun candidate, never truncated."""

    def __init__(self, p, max_e):
        self.p = p
        self.max_e = max_e
        super().__init__(
            f"nu_p(F(p - eps)) > {max_e} for p = {p}; "
            "this would be a Wall-Sun-Sun prime, raise --max-e to resolve it"
        )


class InternalInconsistencyError(FibDensError):
    """A checked number-theoretic invariant failed. Always a bug or a discovery."""
