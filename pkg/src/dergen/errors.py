"""Shared error types with stable codes for CLI exit-code mapping."""

from __future__ import annotations


class PreconditionError(ValueError):
    """An operation was called outside its input domain."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class WitnessBudgetError(RuntimeError):
    """Witness construction exceeded its segment budget."""

    code = "BUDGET_EXCEEDED"


class ClockCycleError(RuntimeError):
    """Witness construction closed up at a single level (clock-type input)."""

    code = "CLOCK_CYCLE"


class InfeasibleError(RuntimeError):
    """Random generation could not satisfy the requested constraints."""

    code = "INFEASIBLE"
