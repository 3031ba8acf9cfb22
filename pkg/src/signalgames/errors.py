"""Exception types shared across the package."""


class SignalGamesError(Exception):
    """Base class for errors raised by this package."""


class EmptyClassError(SignalGamesError, ValueError):
    """A message with zero probability mass was queried."""


class MetricUndefinedError(SignalGamesError, ValueError):
    """A metric's preconditions make its value undefined (e.g. zero variance)."""


class BudgetExceededError(SignalGamesError, RuntimeError):
    """An exact enumeration would exceed the configured work budget."""

    def __init__(self, message: str, required: float | None = None):
        super().__init__(message)
        self.required = required


class ParseError(SignalGamesError, ValueError):
    """A data file failed to parse; carries position information."""

    def __init__(self, message: str, path: str = "", line: int | None = None,
                 column: int | None = None):
        loc = path
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line
        self.column = column
