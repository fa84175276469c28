"""Exceptions shared across the package."""


class BudgetError(RuntimeError):
    """A configured resource cap was exceeded (paths, conditions, tape entries).

    Carries partial diagnostics when the tracer had already produced paths.
    """

    def __init__(self, message, *, paths_evaluated=None, partial_value=None):
        super().__init__(message)
        self.paths_evaluated = paths_evaluated
        self.partial_value = partial_value


class ReplayError(RuntimeError):
    """A program produced a different decision prefix on re-execution.

    Programs must be pure functions of (input, branch decisions); anything
    else (mutable captured state, RNG, I/O) breaks deterministic path replay.
    """
