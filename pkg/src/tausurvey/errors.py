"""Exception types shared across modules."""


class ResourceLimitError(RuntimeError):
    """A configured resource ceiling (series order, scan width) was exceeded."""


class OutOfRangeError(ValueError):
    """An input needs data beyond what the supplied table covers."""


class DeligneViolationError(ValueError):
    """A claimed tau(p) fails the exact bound tau(p)^2 <= 4 p^11."""
