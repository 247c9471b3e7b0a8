"""Exception types shared across the package."""


class CircuitpackError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CircuitpackError, ValueError):
    """Malformed graph text or JSON input."""


class PreconditionError(CircuitpackError, ValueError):
    """An operation was called on input that violates its contract."""


class SizeGuardError(CircuitpackError):
    """Input exceeds the size limits this exact implementation is built for."""


class BudgetExceededError(CircuitpackError):
    """A search ran out of its node budget before reaching a proven answer.

    This is distinct from a negative answer: the search is inconclusive.
    """


class InternalConsistencyError(CircuitpackError):
    """Two independent computations that must agree disagreed.

    Raised only for genuine bugs (the disagreeing facts are proven theorems),
    never for bad input.
    """
