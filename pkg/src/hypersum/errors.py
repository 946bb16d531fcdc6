"""Exceptions shared across the package."""


class BoundExhausted(RuntimeError):
    """A bounded search (recurrence order, ansatz degrees) found nothing."""

    def __init__(self, message: str, bounds):
        super().__init__(message)
        self.bounds = bounds
