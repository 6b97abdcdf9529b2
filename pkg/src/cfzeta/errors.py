"""Exception types shared across the package."""


class CFZetaError(Exception):
    """Base class for computational errors raised by cfzeta."""


class DomainError(CFZetaError, ValueError):
    """Argument outside the domain of an operation."""


class PoleError(CFZetaError, ZeroDivisionError):
    """Evaluation requested at the pole s = 1 (or another genuine singularity)."""


class SumOverflowError(CFZetaError, OverflowError):
    """A sum produced a non-finite value."""


class SingularCellError(CFZetaError, ArithmeticError):
    """The pole of a Mobius piece lies inside its integration interval."""
