"""Exceptions shared across modules."""


class BudgetExceeded(RuntimeError):
    """An enumeration budget would be exceeded.

    Operations with a budget refuse to run rather than silently truncate,
    so partial results never masquerade as complete ones.
    """
