"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedDimensionError(InvalidInputError):
    """The operation is only defined for a different ambient dimension."""


class ParseError(InvalidInputError):
    """A definition file could not be parsed.

    ``location`` is a human-readable pointer such as ``"line 3 column 7
    (byte 41)"`` or ``"maps[2].A"``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured size limit."""

    def __init__(self, message, limit=None):
        self.limit = limit
        super().__init__(message)
