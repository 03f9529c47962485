"""Exception hierarchy shared by the whole package."""


class SingSurfError(Exception):
    """Base class for all errors raised by singsurf."""


class GermParseError(SingSurfError):
    """Syntax or schema error in a germ description.

    Carries 1-based ``line`` and ``column`` of the offending character.
    """

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class PreconditionError(SingSurfError):
    """An operation was called outside its domain (wrong corank, wrong
    parabola class, coordinates not adapted, jet order too low, ...)."""


class DegenerateDataError(SingSurfError):
    """Numerical degeneracy: a quantity the computation must divide by or
    take a sign of sits below the working tolerance."""
