class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class CapacityError(ValueError):
    """Request would exceed the memory guard of a brute-force routine."""


class ValidationError(ValueError):
    """Input matrix fails a structural check (e.g. Hermiticity)."""
