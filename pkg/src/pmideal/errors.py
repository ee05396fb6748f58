"""Exception types shared across the package, plus the enumeration budget."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 2**34
BUDGET_ENV = "PMIDEAL_BUDGET"


class ModulusMismatch(ValueError):
    pass


class SingularMatrixError(ZeroDivisionError):
    pass


class NotPermissibleError(ValueError):
    pass


class InvariantViolation(AssertionError):
    """An internal cross-check disagreed with a closed form."""


class EmptyLocusError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised before an enumeration whose projected size exceeds the budget."""

    def __init__(self, what: str, projected: int, budget: int):
        self.what = what
        self.projected = projected
        self.budget = budget
        super().__init__(
            f"{what}: projected {projected} evaluated cells exceeds budget {budget} "
            f"(set {BUDGET_ENV} to raise it)"
        )


def current_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return DEFAULT_BUDGET
    return int(raw)


def check_budget(what: str, cells: int) -> None:
    budget = current_budget()
    if cells > budget:
        raise BudgetExceeded(what, cells, budget)
