"""Exception hierarchy for tempcert."""


class TempcertError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TempcertError, ValueError):
    """Matrix shapes are incompatible with the requested operation."""


class DomainError(TempcertError, ValueError):
    """An integer argument (d, k, outcome index, ...) is out of range."""


class SpectrumError(TempcertError, ValueError):
    """An eigenvalue could not be matched to a d-th root of unity."""


class PreconditionError(TempcertError, ValueError):
    """An input violates a documented precondition."""


class ValidationError(TempcertError, ValueError):
    """A measurement or observable failed structural validation.

    ``residuals`` maps a short label to the offending residual value.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class NumericError(TempcertError, ArithmeticError):
    """A computed quantity left its admissible range beyond tolerance."""


class RealnessError(NumericError):
    """The temporal expression acquired an imaginary part."""


class ConsistencyError(TempcertError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class ConstructionError(TempcertError, RuntimeError):
    """A canonical object could not be built with the required properties."""


class NonUniformOverlapError(TempcertError, ValueError):
    """Overlap entropy depends on the first outcome, so no single value exists."""
