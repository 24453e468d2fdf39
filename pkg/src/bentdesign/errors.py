"""Exception types shared across modules."""


class DomainError(ValueError):
    """An input violates a mathematical precondition (not bent, not LCD, ...)."""


class SizeGuardError(DomainError):
    """An enumeration would exceed its hard size limit."""


class ParseError(ValueError):
    """Malformed function or file text; ``offset`` is the 0-based position."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)
        self.offset = offset
