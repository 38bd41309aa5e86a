"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class GammaDomainError(DomainError):
    """A Gamma/Beta argument would be non-positive.

    ``argument`` names the offending expression and ``value`` holds its value.
    """

    def __init__(self, argument, value):
        self.argument = argument
        self.value = value
        super().__init__(f"Gamma argument {argument} = {value:.6g} must be positive")


class DivergentMoment(ArithmeticError):
    """An integral of the density diverges for the requested order."""


class NonConvergence(ArithmeticError):
    """An iterative routine ran out of budget.

    The best available estimate is kept on the exception as ``value`` and
    ``error`` when there is one.
    """

    def __init__(self, message, value=None, error=None):
        self.value = value
        self.error = error
        super().__init__(message)


class InvalidBracket(ValueError):
    """A minimization bracket is empty or reversed."""


class MixedDirection(ValueError):
    """Lower and upper bounds were compared with each other."""


class ParseError(ValueError):
    """Malformed data file. ``line`` is the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class SchemaError(ParseError):
    """A data file is missing a required column."""
