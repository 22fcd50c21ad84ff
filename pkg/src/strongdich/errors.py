"""Exception types shared across the package."""

from __future__ import annotations


class OrderCapExceeded(RuntimeError):
    """A group closure grew past the configured order cap."""


class BudgetExceeded(RuntimeError):
    """A brute-force computation was requested beyond its size budget."""


class InternalCheckError(RuntimeError):
    """An exact internal consistency check failed (e.g. a divisibility test).

    This always indicates a bug, never bad user input.
    """
