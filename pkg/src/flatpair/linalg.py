"""Dense real vector and matrix primitives.

Vectors are 1-D float arrays, matrices 2-D float arrays whose *columns*
are the vectors of interest.  A matrix with zero columns (shape ``(m, 0)``)
is a legal value and stands for an empty direction set.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionError, EmptyInputError, ShapeError, SingularSystemError

__all__ = [
    "DEFAULT_RANK_TOL",
    "GRAM_CLAMP_TOL",
    "as_vector",
    "as_matrix",
    "dot",
    "norm",
    "gram_matrix",
    "determinant",
    "gram_clamp_threshold",
    "gram_determinant",
    "solve_linear",
    "numerical_rank",
]

DEFAULT_RANK_TOL = 1e-9
GRAM_CLAMP_TOL = 1e-12
SOLVE_PIVOT_TOL = 1e-13


def as_vector(p, name: str = "vector") -> np.ndarray:
    """Coerce ``p`` to a finite 1-D float array of length at least one."""
    arr = np.array(p, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInputError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_matrix(M, rows: int | None = None, name: str = "matrix") -> np.ndarray:
    """Coerce ``M`` to a finite 2-D float array.

    ``rows`` fixes the row count, which is needed to give an empty column
    list a shape.
    """
    arr = np.array(M, dtype=float)
    if arr.size == 0:
        if rows is None:
            if arr.ndim == 2 and arr.shape[0] > 0:
                rows = arr.shape[0]
            else:
                raise DimensionError(f"cannot infer row count of empty {name}")
        return np.zeros((rows, 0))
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if rows is not None and arr.shape[0] != rows:
        raise DimensionError(f"{name} has {arr.shape[0]} rows, expected {rows}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def dot(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionError(f"dot of shapes {p.shape} and {q.shape}")
    # elementwise product then a fixed-order sum: exactly symmetric
    return float(np.sum(p * q))


def norm(p) -> float:
    return float(np.sqrt(dot(p, p)))


def _columns(vectors) -> np.ndarray:
    """Stack a sequence of vectors (or take a matrix) as columns."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        Y = np.asarray(vectors, dtype=float)
    else:
        vectors = list(vectors)
        if not vectors:
            raise EmptyInputError("need at least one vector")
        lengths = {np.shape(v) for v in vectors}
        if len(lengths) != 1 or len(next(iter(lengths))) != 1:
            raise DimensionError(f"vectors have inconsistent shapes {sorted(lengths)}")
        Y = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    if Y.shape[1] == 0:
        raise EmptyInputError("need at least one vector")
    return Y


def gram_matrix(vectors: Sequence | np.ndarray) -> np.ndarray:
    """Matrix of pairwise inner products ``G[i, j] = y_i . y_j``.

    ``vectors`` is either a sequence of equal-length vectors or a 2-D array
    whose columns are the vectors.
    """
    Y = _columns(vectors)
    n = Y.shape[1]
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = dot(Y[:, i], Y[:, j])
    return G


def determinant(M) -> float:
    """Determinant by row reduction with partial pivoting, O(n^3)."""
    U = np.array(M, dtype=float)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] == 0:
        raise ShapeError(f"determinant needs a non-empty square matrix, got {U.shape}")
    n = U.shape[0]
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(U[k:, k])))
        if U[p, k] == 0.0:
            return 0.0
        if p != k:
            U[[k, p]] = U[[p, k]]
            det = -det
        det *= U[k, k]
        if k + 1 < n:
            factors = U[k + 1 :, k] / U[k, k]
            U[k + 1 :, k:] -= np.outer(factors, U[k, k:])
    return float(det)


def gram_clamp_threshold(G: np.ndarray, tol: float = GRAM_CLAMP_TOL) -> float:
    """Magnitude below which a Gram determinant is treated as zero."""
    return tol * max(1.0, float(np.prod(np.diag(G))))


def gram_determinant(vectors, clamp: bool = True, tol: float = GRAM_CLAMP_TOL) -> float:
    """Determinant of the Gram matrix of ``vectors``.

    The exact value is never negative and vanishes iff the vectors are
    linearly dependent.  With ``clamp`` set, any result whose magnitude is
    at most ``tol * max(1, prod(diag G))`` is returned as 0.0.
    """
    G = gram_matrix(vectors)
    g = determinant(G)
    if clamp and abs(g) <= gram_clamp_threshold(G, tol):
        return 0.0
    return g


def solve_linear(G, r, tol: float = SOLVE_PIVOT_TOL) -> np.ndarray:
    """Solve ``G x = r`` by Gaussian elimination with partial pivoting.

    Raises SingularSystemError when a pivot falls to ``tol`` times the
    largest entry of ``G`` or below.
    """
    A = np.array(G, dtype=float)
    b = np.array(r, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ShapeError(f"solve_linear needs a non-empty square matrix, got {A.shape}")
    n = A.shape[0]
    if b.shape != (n,):
        raise DimensionError(f"right-hand side has shape {b.shape}, expected ({n},)")
    scale = float(np.max(np.abs(A)))
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        pivot = abs(A[p, k])
        if pivot <= tol * scale:
            raise SingularSystemError(f"singular system: pivot {pivot:.3e} at step {k}", pivot)
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= np.outer(factors, A[k, k:])
        b[k + 1 :] -= factors * b[k]
    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x


def numerical_rank(M, tol: float = DEFAULT_RANK_TOL) -> tuple[int, tuple[int, ...]]:
    """Greedy column selection by Gram-Schmidt in index order.

    Column ``j`` is kept when its residual after projection onto the span of
    the previously kept columns has norm ``> tol * max(1, ||M[:, j]||)``.
    Returns the rank and the indices of the kept columns.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"numerical_rank needs a 2-D array, got {M.shape}")
    basis: list[np.ndarray] = []
    kept: list[int] = []
    for j in range(M.shape[1]):
        col = M[:, j]
        w = col.copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            for q in basis:
                w -= dot(q, w) * q
        res = norm(w)
        if res > tol * max(1.0, norm(col)):
            basis.append(w / res)
            kept.append(j)
    return len(kept), tuple(kept)
