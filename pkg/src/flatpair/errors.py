"""Exception hierarchy shared by every module."""


class FlatPairError(Exception):
    """Base class for all errors raised by flatpair."""


class DimensionError(FlatPairError, ValueError):
    """Vectors or matrices whose ambient dimensions do not agree."""


class EmptyInputError(FlatPairError, ValueError):
    pass


class ShapeError(FlatPairError, ValueError):
    """A square matrix was required."""


class SingularSystemError(FlatPairError, ArithmeticError):
    """Linear system is singular at the configured tolerance.

    ``pivot`` holds the magnitude that failed the test (a pivot for
    elimination, the determinant for the Cramer route).
    """

    def __init__(self, message: str, pivot: float):
        super().__init__(message)
        self.pivot = pivot


class RankDeficientError(FlatPairError, ArithmeticError):
    """The direction columns are not of full column rank at tolerance."""


class InvariantError(FlatPairError, AssertionError):
    """A postcondition of a computed solution failed."""
