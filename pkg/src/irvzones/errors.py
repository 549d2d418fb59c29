"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Raised when graph6 or edge-list input cannot be decoded."""


class DisconnectedGraphError(ValueError):
    """Raised when a graph operation requires a connected graph."""


class BudgetExceededError(RuntimeError):
    """A bounded search ran out of budget before producing a complete answer.

    Raised instead of returning partial results; callers that can tolerate
    incompleteness must catch it explicitly.
    """


class MalformedInstanceError(ValueError):
    """Raised for structurally invalid reduction instances."""
