"""Node budgets for the exhaustive searches.

Every potentially expensive search (minor containment, subdivision routing,
decomposition) counts the nodes it expands against a budget and raises
:class:`~circuitpack.errors.BudgetExceededError` when the budget runs out.
A search never returns an unproven answer.
"""

from __future__ import annotations

import os

from .errors import BudgetExceededError

#: Default node cap, generous enough for every desk-scale input in the test
#: suite.  Override with the CIRCUITPACK_BUDGET environment variable or an
#: explicit Budget instance.
DEFAULT_NODE_BUDGET = 50_000_000

_ENV_VAR = "CIRCUITPACK_BUDGET"


def default_budget_limit() -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value}")
    return value


class Budget:
    """A mutable spend counter with a hard limit."""

    __slots__ = ("limit", "spent")

    def __init__(self, limit: int | None = None):
        self.limit = default_budget_limit() if limit is None else limit
        self.spent = 0

    def spend(self, amount: int = 1) -> None:
        self.spent += amount
        if self.spent > self.limit:
            raise BudgetExceededError(
                f"search budget of {self.limit} nodes exceeded"
            )

    def remaining(self) -> int:
        return max(0, self.limit - self.spent)


def ensure_budget(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget()
