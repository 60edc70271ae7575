class InputError(ValueError):
    """Malformed arguments: bad dimensions, out-of-range values, shape mismatches."""


class PromiseViolation(ValueError):
    """A function table does not satisfy the constant / evenly-distributed promise."""
