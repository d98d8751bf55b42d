"""Optimal pair and distance of two flats via Gram determinants.

With ``A = [B C] = [a_1 ... a_n]``, ``d = c - b``, ``G = G(a_1..a_n)``,
``g = det G`` and ``r_j = d . a_j``, the optimal coefficients are read off
the last row of the bordered determinant

    | G      r |
    | a_1..a_n 0 |

Its last-row cofactors, divided by ``-g``, are the entries of
``x* = [u*; v*]``; using the vectors ``a_j`` themselves in that row yields
the projection ``A x*`` of ``d`` onto ``Range(A)``.  The squared distance is
``g(d, a_1..a_n) / g(a_1..a_n)``.

The closed forms need ``A`` to have full column rank.  When it does not,
the solver keeps a maximal independent subset of columns (greedy, in index
order), solves on those and reports the pair as non-unique.  Forming ``G``
squares the condition number of ``A``; one step of residual correction
(the same cofactor solve applied to ``A^T (d - A x)``) recovers most of the
accuracy lost, and results are reliable up to a condition estimate of
roughly 1e7.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvariantError, RankDeficientError, SingularSystemError
from .flats import Flat, ProblemData, contains, difference_setup
from .linalg import (
    DEFAULT_RANK_TOL,
    GRAM_CLAMP_TOL,
    determinant,
    dot,
    gram_clamp_threshold,
    gram_matrix,
    norm,
    numerical_rank,
    solve_linear,
)

Path = Literal["full_rank_cramer", "reduced_columns", "point_point"]

ORTHOGONALITY_TOL = 1e-8


@dataclass(frozen=True)
class Diagnostics:
    gram_det: float
    rank_used: int
    dropped_columns: tuple[int, ...]
    unique: bool
    path: Path
    tolerances_used: dict = field(default_factory=dict)
    numerator_clamped: bool = False
    coefficient_method: str = "cramer"
    refinement_steps: int = 0


@dataclass(frozen=True, eq=False)
class PairSolution:
    b_star: np.ndarray
    c_star: np.ndarray
    u_star: np.ndarray
    v_star: np.ndarray
    distance: float
    distance_sq_gram: float
    diagnostics: Diagnostics

    @property
    def x_star(self) -> np.ndarray:
        return np.concatenate([self.u_star, self.v_star])


def full_rank_threshold(G: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> float:
    """Smallest Gram determinant accepted as full column rank."""
    return tol**2 * max(1.0, float(np.prod(np.diag(G))))


def _full_rank(G: np.ndarray, g: float, rank: int, tol: float) -> bool:
    # g alone cannot certify rank: its round-off floor (~1e-16 relative) sits
    # above tol**2, so the column-space rank test on A must agree as well
    return rank == G.shape[0] and g > full_rank_threshold(G, tol)


def bordered_cofactors(G: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Cofactors of the last row of the bordered matrix ``[[G, r], [*, 0]]``.

    Entry ``j`` is the signed minor obtained by deleting the last row and
    column ``j``; the cofactor of the corner (which multiplies 0) is ``g``
    and is not returned.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    top = np.hstack([G, np.asarray(r, dtype=float).reshape(n, 1)])
    cof = np.empty(n)
    for j in range(n):
        minor = np.delete(top, j, axis=1)
        cof[j] = (-1.0) ** (n + j) * determinant(minor)
    return cof


def bordered_expansion(G: np.ndarray, r: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """Expand the bordered determinant along a last row of vectors.

    Returns ``sum_j cof_j a_j``, a vector in R^m.  Divided by ``-g`` it is
    the orthogonal projection of ``d`` onto the span of ``columns``.
    """
    return np.asarray(columns, dtype=float) @ bordered_cofactors(G, r)


def coefficients_cramer(
    G: np.ndarray, r: np.ndarray, g: float, tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Solve ``G x = r`` from the last-row cofactors of the bordered determinant.

    ``x_j = -cof_j / g``, which equals ``det(G with column j := r) / g``.
    Raises SingularSystemError when ``g`` does not exceed
    :func:`full_rank_threshold`.
    """
    G = np.asarray(G, dtype=float)
    thr = full_rank_threshold(G, tol)
    if not g > thr:
        raise SingularSystemError(f"Gram determinant {g:.3e} <= threshold {thr:.3e}", abs(g))
    return -bordered_cofactors(G, r) / g


def _gram_ratio(columns: np.ndarray, d: np.ndarray, g: float) -> tuple[float, bool]:
    """``g(d, a_1..a_n) / g``, with the numerator clamped at round-off level."""
    G_ext = gram_matrix(np.column_stack([d, columns]))
    num = determinant(G_ext)
    if num <= gram_clamp_threshold(G_ext, GRAM_CLAMP_TOL):
        return 0.0, True
    return num / g, False


def _refined_cramer(G, g, columns, d, tol, steps) -> np.ndarray:
    x = coefficients_cramer(G, columns.T @ d, g, tol)
    for _ in range(steps):
        x = x + coefficients_cramer(G, columns.T @ (d - columns @ x), g, tol)
    return x


def _solve_kept(G, columns, d, g, tol, steps) -> tuple[np.ndarray, str]:
    try:
        return _refined_cramer(G, g, columns, d, tol, steps), "cramer"
    except SingularSystemError:
        pass
    r = columns.T @ d
    # kept columns passed the rank test but g is tiny; Cramer is not trustworthy there
    try:
        return solve_linear(G, r), "elimination"
    except SingularSystemError:
        return np.linalg.lstsq(G, r, rcond=None)[0], "lstsq"


def optimal_pair(
    Vb: Flat, Vc: Flat, tol: float = DEFAULT_RANK_TOL, refine: int = 1
) -> PairSolution:
    """Closest points ``b* = b + B u*`` on ``Vb`` and ``c* = c - C v*`` on ``Vc``.

    ``refine`` is the number of residual-correction steps applied to the
    cofactor solution (0 gives the plain closed form).  Always succeeds.  ``diagnostics.path`` tells which route was taken and
    ``diagnostics.unique`` whether the coefficients are unique.
    """
    prob = difference_setup(Vb, Vc)
    A, d, n = prob.A, prob.d, prob.n
    tols = {"rank": tol, "gram_clamp": GRAM_CLAMP_TOL}

    if n == 0:
        diag = Diagnostics(
            gram_det=1.0, rank_used=0, dropped_columns=(), unique=True,
            path="point_point", tolerances_used=tols, coefficient_method="none",
        )
        return _assemble(Vb, Vc, prob, np.zeros(0), dot(d, d), diag)

    G = gram_matrix(A)
    g = determinant(G)
    tols["full_rank_threshold"] = full_rank_threshold(G, tol)

    rank, kept = numerical_rank(A, tol)
    if _full_rank(G, g, rank, tol):
        x = _refined_cramer(G, g, A, d, tol, refine)
        dist_sq, clamped = _gram_ratio(A, d, g)
        diag = Diagnostics(
            gram_det=g, rank_used=n, dropped_columns=(), unique=True,
            path="full_rank_cramer", tolerances_used=tols, numerator_clamped=clamped,
            refinement_steps=refine,
        )
        return _assemble(Vb, Vc, prob, x, dist_sq, diag)

    dropped = tuple(j for j in range(n) if j not in kept)
    x = np.zeros(n)
    method = "none"
    clamped = False
    if rank == 0:
        dist_sq = dot(d, d)
    else:
        Ak = A[:, list(kept)]
        Gk = G[np.ix_(kept, kept)]
        gk = determinant(Gk)
        xk, method = _solve_kept(Gk, Ak, d, gk, tol, refine)
        x[list(kept)] = xk
        if gk > 0:
            dist_sq, clamped = _gram_ratio(Ak, d, gk)
        else:
            dist_sq = float("nan")
    diag = Diagnostics(
        gram_det=g, rank_used=rank, dropped_columns=dropped, unique=rank == n,
        path="reduced_columns", tolerances_used=tols, numerator_clamped=clamped,
        coefficient_method=method, refinement_steps=refine if method == "cramer" else 0,
    )
    return _assemble(Vb, Vc, prob, x, dist_sq, diag)


def _assemble(Vb: Flat, Vc: Flat, prob: ProblemData, x, dist_sq, diag) -> PairSolution:
    # x solves min ||A x - d||, so b* = b + B x_u and c* = c - C x_v;
    # map back to each flat's own sign convention
    x_u, x_v = x[: prob.split], x[prob.split :]
    u = Vb.sign * x_u
    v = -Vc.sign * x_v
    b_star = Vb.point(u)
    c_star = Vc.point(v)
    return PairSolution(
        b_star=b_star,
        c_star=c_star,
        u_star=u,
        v_star=v,
        distance=norm(b_star - c_star),
        distance_sq_gram=dist_sq,
        diagnostics=diag,
    )


def distance_squared_gram(Vb: Flat, Vc: Flat, tol: float = DEFAULT_RANK_TOL) -> float:
    """Squared distance as the ratio ``g(d, a_1..a_n) / g(a_1..a_n)``.

    Raises RankDeficientError when the direction columns are not of full
    column rank at ``tol``; :func:`optimal_pair` handles that case.
    """
    prob = difference_setup(Vb, Vc)
    if prob.n == 0:
        return dot(prob.d, prob.d)
    G = gram_matrix(prob.A)
    g = determinant(G)
    if not _full_rank(G, g, numerical_rank(prob.A, tol)[0], tol):
        raise RankDeficientError(
            f"direction columns are rank deficient (g = {g:.3e}); use optimal_pair"
        )
    return _gram_ratio(prob.A, prob.d, g)[0]


def distance(Vb: Flat, Vc: Flat, tol: float = DEFAULT_RANK_TOL) -> float:
    """``||b* - c*||`` for the optimal pair; valid on every path."""
    return optimal_pair(Vb, Vc, tol).distance


def verify_solution(
    sol: PairSolution, Vb: Flat, Vc: Flat, tol: float = ORTHOGONALITY_TOL
) -> None:
    """Raise InvariantError unless ``sol`` meets the solver's postconditions.

    Checks membership of both points, orthogonality of ``b* - c*`` to every
    direction column, and ``distance == ||b* - c*||``.  Columns dropped by
    the rank test are only orthogonal up to the rank tolerance, which is
    added as slack for them.
    """
    if not contains(Vb, sol.b_star, tol):
        raise InvariantError("b* does not lie on the first flat")
    if not contains(Vc, sol.c_star, tol):
        raise InvariantError("c* does not lie on the second flat")
    res = sol.b_star - sol.c_star
    rn = norm(res)
    A = difference_setup(Vb, Vc).A
    rank_tol = sol.diagnostics.tolerances_used.get("rank", DEFAULT_RANK_TOL)
    for j in range(A.shape[1]):
        a = A[:, j]
        na = norm(a)
        allowed = tol * max(1.0, rn * na)
        if j in sol.diagnostics.dropped_columns:
            allowed += rank_tol * rn * max(1.0, na)
        if abs(dot(res, a)) > allowed:
            raise InvariantError(f"residual is not orthogonal to column {j}")
    if abs(sol.distance - rn) > 1e-10 * max(1.0, rn):
        raise InvariantError("reported distance differs from ||b* - c*||")
