"""Exception hierarchy shared across the simulation pipeline.

Everything derives from :class:`UnicornSimError` so callers (CLI, service)
can map validation failures to diagnostics / exit codes in one place.
"""


class UnicornSimError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(UnicornSimError):
    """Input failed a structural or range check."""


class UnknownGroup(ValidationError):
    """An affiliation label does not exist in the factor universe."""


class KindMismatch(ValidationError):
    """An affiliation label resolves to a group of the wrong kind."""


class DegenerateLoading(ValidationError):
    """Affiliation vector has (near-)zero variance under the correlation matrix."""


class CalibrationInfeasible(ValidationError):
    """The requested average pair correlation would need w0^2 >= 1."""


class NonPositiveRhoBar(ValidationError):
    """Average normalized pair correlation is <= 0; no real scale exists."""


class OutOfRange(ValidationError):
    """A numeric argument is outside its documented domain."""


class NotPSD(ValidationError):
    """Matrix is not positive semidefinite; run ensure_psd before factoring."""


class InvalidLoading(ValidationError):
    """A deal's idiosyncratic variance came out negative beyond tolerance."""


class InvalidComposition(ValidationError):
    """A portfolio composition violates mix or size constraints."""


class ParseError(ValidationError):
    """A data file could not be parsed; message carries row/column context."""


class NonPositivePrice(ValidationError):
    """Price table contains a zero or negative price."""


class InsufficientData(ValidationError):
    """Not enough observations for the requested computation."""


class MissingTicker(ValidationError):
    """A basket references a ticker absent from the price table."""


class ZeroVariance(ValidationError):
    """A return series is constant; correlation is undefined."""
