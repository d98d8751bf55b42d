"""Optimal pair and distance of two affine subspaces via Gram determinants."""
from .errors import (
    DimensionError,
    EmptyInputError,
    FlatPairError,
    InvariantError,
    RankDeficientError,
    ShapeError,
    SingularSystemError,
)
from .flats import Flat, ProblemData, contains, difference_setup, validate
from .linalg import (
    determinant,
    dot,
    gram_determinant,
    gram_matrix,
    norm,
    numerical_rank,
    solve_linear,
)
from .oracle import OracleReport, alternating_projections, orthonormal_basis, sampled_upper_bound
from .solver import (
    Diagnostics,
    PairSolution,
    coefficients_cramer,
    distance,
    distance_squared_gram,
    optimal_pair,
)

__version__ = "0.1.0"
