"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ToolkitError):
    """A parameter or configuration value violates a precondition.

    The message names the offending field or location.
    """


class DimensionError(ValidationError):
    """Matrix or vector dimensions are inconsistent."""


class SpectrumHit(ToolkitError):
    """A frequency shift is numerically singular (is lies in the spectrum)."""

    def __init__(self, s: float, message: str = ""):
        self.s = s
        super().__init__(message or f"i*s is in the spectrum at s={s!r}")


class NumericalError(ToolkitError):
    """A factorization or eigensolver failed."""
