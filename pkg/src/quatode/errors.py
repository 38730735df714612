"""Exception types shared across the package."""


class QuatodeError(Exception):
    """Base class for all package-specific errors."""


class ParseError(QuatodeError):
    """Syntax error in an operator, ODE, or quaternion expression.

    Carries the byte offset of the offending character in ``offset``.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = "%s (at offset %d)" % (message, offset)
        super().__init__(message)
        self.offset = offset


class DomainError(QuatodeError):
    """Input outside the mathematical domain of an operation."""


class NumericError(QuatodeError):
    """A numerical procedure failed to reach its accuracy contract."""


class StructureError(QuatodeError):
    """A matrix does not have the structural pattern the caller requires."""
