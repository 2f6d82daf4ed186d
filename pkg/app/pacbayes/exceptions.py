"""Exceptions raised by the pacbayes app beyond Django's ValidationError."""


class NumericalError(ArithmeticError):
    """A computation produced a non-finite value where a finite one was required."""
