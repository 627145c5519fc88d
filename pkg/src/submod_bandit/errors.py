"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates an operation's precondition."""


class InfeasibleTargetError(ValueError):
    """The L1 representation LP has no feasible point for the given target."""


class ParseError(ValueError):
    """A data file is malformed.  ``line`` is 1-based, counting the header."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyResultError(ValueError):
    """A filtering step removed every candidate."""


class ConfigError(ValueError):
    """An experiment configuration is invalid."""


class BudgetExhaustedError(RuntimeError):
    """A run hit its hard sample cap.  ``partial`` holds the run state at that point."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
