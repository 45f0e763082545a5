"""Error types shared across the package."""


class InputError(ValueError):
    """An instance or parameter violates a documented precondition."""


class CapacityError(RuntimeError):
    """An exact enumeration would exceed its configured budget.

    Oracles fail loudly instead of silently grinding; callers may retry
    with a larger budget.
    """
