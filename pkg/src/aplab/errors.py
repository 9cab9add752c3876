"""Exception types shared across the toolkit."""


class ContractViolationError(ValueError):
    """An operation was called with inputs violating its precondition."""


class PostconditionError(RuntimeError):
    """A runtime-verified bound failed; signals an implementation bug."""


class ScaleExhaustedError(RuntimeError):
    """An interval is too short to subdivide usefully at the requested eta."""


class IncrementNotFoundError(RuntimeError):
    """No progression met the relaxed density-gain threshold."""


class DichotomyFailedError(RuntimeError):
    """Randomized rounding failed to realize the guaranteed correlation."""


class SieveCapacityError(ValueError):
    """A request exceeds the configured sieve capacity."""
