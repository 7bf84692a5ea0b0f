"""Exception hierarchy shared by the library and the command line."""


class TorusGerbeError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TorusGerbeError):
    """Malformed input text. ``location`` points at the offending field."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ValidationError(TorusGerbeError):
    """Input parsed fine but violates a mathematical invariant."""

    def __init__(self, message, invariant=None):
        self.invariant = invariant
        super().__init__(message)


class SpecMismatch(TorusGerbeError):
    """Two algebra elements belong to different algebras."""


class NotInvertible(TorusGerbeError):
    """The element has no multiplicative inverse in the algebra."""


class SingularImaginaryPart(ValidationError):
    """Im(tau) could not be inverted over the algebra."""

    def __init__(self, message="imaginary part of tau is not invertible"):
        super().__init__(message, invariant="SingularImaginaryPart")


class InvalidForm(ValidationError):
    """A form does not satisfy the condition an operation requires of it."""
