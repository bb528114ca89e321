"""Exceptions shared across the engine."""


class CapExceeded(RuntimeError):
    """A search or enumeration would exceed its configured size cap.

    Raised instead of returning a truncated answer.
    """


class HypothesisError(ValueError):
    """Input does not satisfy the hypotheses an operation requires."""

    def __init__(self, message, failed=None):
        super().__init__(message)
        self.failed = failed
