"""Exception types shared by all modules."""


class FmlogError(Exception):
    """Base class for library errors."""


class InvalidInput(FmlogError, ValueError):
    """Input violates a documented precondition."""


class DegenerateDirection(InvalidInput):
    """A tuple of vectors has no direction (all entries coincide)."""


class ResourceLimit(FmlogError):
    """Requested size exceeds a configured enumeration bound."""


class InternalConsistencyError(FmlogError, AssertionError):
    """A construction produced data that violates its own invariants."""
