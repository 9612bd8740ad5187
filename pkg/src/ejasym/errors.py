"""Exception hierarchy shared by every module."""


class EJError(Exception):
    """Base class for all errors raised by ejasym."""


class InvalidInput(EJError, ValueError):
    pass


class PoleError(EJError, ArithmeticError):
    """Evaluation requested at a pole of a special function."""


class SectorError(InvalidInput):
    """The parameter lies outside the open sector |arg a| < pi/2."""


class RegimeError(InvalidInput):
    """Operation not defined for the (p, w) regime supplied."""


class ConvergenceError(EJError, ArithmeticError):
    pass


class BudgetError(EJError, RuntimeError):
    """Direct summation would exceed the configured term budget."""

    def __init__(self, message, terms_used=None):
        super().__init__(message)
        self.terms_used = terms_used


class NoMinimumError(EJError, ArithmeticError):
    """Term magnitudes kept decreasing through the search limit."""

    def __init__(self, message, limit):
        super().__init__(message)
        self.limit = limit
