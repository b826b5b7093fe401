"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class EstimationError(RuntimeError):
    """Spot-check statistics are insufficient to evaluate the inequality."""


class CapacityError(ValueError):
    """Requested exact computation exceeds the supported problem size."""
