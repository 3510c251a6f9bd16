"""Exception types shared across the package.

The CLI maps these onto its exit codes: :class:`InputError` (and its
subclass :class:`ValidationError`) to 2, :class:`ConsistencyError` to 3.
"""


class InputError(ValueError):
    """Malformed or inconsistent user input."""


class ValidationError(InputError):
    """Input parsed fine but fails a structural check (dimension, link, ...)."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = list(offending or [])


class ConsistencyError(RuntimeError):
    """An invariant that the mathematics guarantees did not hold.

    Raising this always means a bug (or a corrupted package), never bad input.
    """
