"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RegimeError(DomainError):
    """A wave speed lies outside the admissible interval of its family.

    The offending interval is kept on the exception so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class ConvergenceError(RuntimeError):
    """An iterative method failed to reach its tolerance."""


class VerificationError(RuntimeError):
    """A numerical check against an analytic prediction failed."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedFamily(DomainError):
    """The requested quantity is not defined for this wave family."""


class UnsupportedField(DomainError):
    """The requested quantity is not defined for this kind of field."""
