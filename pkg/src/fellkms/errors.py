class InputError(ValueError):
    """Malformed or inconsistent input data."""


class NotAStateError(ValueError):
    """A functional that cannot be a state (e.g. negative mass on a unit)."""


class PreconditionError(ValueError):
    """An operation was called on data outside its domain."""


class DepthExceededError(RuntimeError):
    """A search over paths ran past the configured truncation depth."""
