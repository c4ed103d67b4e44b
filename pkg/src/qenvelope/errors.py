"""Exception hierarchy shared by every module."""


class QEnvelopeError(Exception):
    """Base class for all library errors."""


class ValidationError(QEnvelopeError, ValueError):
    """An input violates a documented invariant."""


class ParseError(ValidationError):
    """A text input could not be parsed."""


class DomainError(ValidationError):
    """A numeric argument lies outside the function's domain."""


class InfeasibleMoments(ValidationError):
    """No distribution of the requested family reproduces the moments."""


class EmptySample(ValidationError):
    """An operation that needs data received none."""


class DegenerateDesign(ValidationError):
    """Too few distinct abscissae for a quadratic fit."""


class Unstable(ValidationError):
    """Offered traffic reaches or exceeds link capacity."""


class NoEnvelopeFound(QEnvelopeError):
    """No candidate load on the grid dominates the sample.

    ``load`` is set when the failure happened inside a load sweep.
    """

    def __init__(self, message: str, load: float | None = None):
        super().__init__(message)
        self.load = load
