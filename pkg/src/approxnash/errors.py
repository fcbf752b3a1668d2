"""Exceptions shared across the package."""

from approxnash.indicators import ConsistencyError


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size budget."""


__all__ = ["BudgetExceeded", "ConsistencyError"]
