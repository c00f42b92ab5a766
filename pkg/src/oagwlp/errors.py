"""Exception hierarchy for oagwlp."""


class OagwlpError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(OagwlpError, ValueError):
    """Inputs that do not fit together (mismatched spaces, lengths, indices)."""


class CapacityError(OagwlpError):
    """A computation was refused because it exceeds a size guard."""


class UnsupportedDesignError(OagwlpError, ValueError):
    """The operation is not defined for this kind of design."""


class InternalConsistencyError(OagwlpError, AssertionError):
    """An exactness check that should never fail did fail."""


class ParseError(OagwlpError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
