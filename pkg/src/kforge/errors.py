"""Exception hierarchy shared by all kforge modules."""

from __future__ import annotations


class KforgeError(Exception):
    """Base class for every error raised by this package."""


class OrderMismatch(KforgeError):
    """Two series (or operators) with different truncation orders were mixed."""


class NonInvertibleConstantTerm(KforgeError):
    """Series inversion requires a nonzero constant term."""


class NonNilpotentArgument(KforgeError):
    """exp/log of a truncated series requires a vanishing constant term."""


class ConstantTermNotOne(KforgeError):
    """Binomial powers are defined only for series with constant term 1."""


class NonDivisibleSeries(KforgeError):
    """Exact division by a power of the variable failed a divisibility check."""


class DimMismatch(KforgeError):
    """Operators over different spacetime dimensions were combined."""


class DegreeCapExceeded(KforgeError):
    """A product created a monomial above the configured total-degree cap."""


class NonInvertibleTensor(KforgeError):
    """Tensor inversion requires leading term 1 (x) 1 at zeroth order."""


class NonInvertibleOperator(KforgeError):
    """Operator inversion requires the identity at zeroth order."""


class LegNotInSpan(KforgeError):
    """A tensor leg could not be written in the requested generator words.

    ``failure_order`` is the lowest degree (in the deformation parameter)
    of the unrepresentable residual, when known.
    """

    def __init__(self, message: str, failure_order: int | None = None):
        super().__init__(message)
        self.failure_order = failure_order


class UnknownGenerator(KforgeError):
    """A generator name outside the published table was requested."""


class NonUnitPsiConstantTerm(KforgeError):
    """Realization input psi must satisfy psi(0) = 1."""


class DomainViolation(KforgeError):
    """A dispersion formula was evaluated outside its real domain."""


class NoSignChange(KforgeError):
    """Root bracketing failed: no sign change over the given interval."""


class IOFailure(KforgeError):
    """Reading or writing an output artifact failed."""


class ExprSyntaxError(KforgeError):
    """Polynomial source text failed to parse; carries line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnknownSymbol(ExprSyntaxError):
    """An identifier other than ``i`` or ``x<index>`` appeared in the input."""


class IndexOutOfRange(ExprSyntaxError):
    """A coordinate index at or above the configured dimension was used."""
