"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input text (bad token, negative id); carries a line number when known."""


class ValidationError(ValueError):
    """Structurally valid input that violates a contract (duplicates, empty pattern, ...)."""


class IntervalError(ValueError):
    """An interval falls outside the addressed array."""


class OverlapError(ValueError):
    """Two query intervals overlap where disjoint intervals are required."""


class CapacityError(RuntimeError):
    """A precomputation would exceed its configured memory budget."""


class InternalConsistencyError(RuntimeError):
    """An internal invariant was violated; indicates a bug, mapped to exit code 3 in the CLI."""
