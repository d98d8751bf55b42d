"""Independent checks on the solver that never touch Gram determinants.

``alternating_projections`` iterates orthogonal projections between the two
flats; for affine sets the gap converges to the distance.
``sampled_upper_bound`` evaluates the distance at random coefficient pairs,
which can only overestimate it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flats import Flat
from .linalg import DEFAULT_RANK_TOL

AP_AGREEMENT_TOL = 1e-6
DEFAULT_MAX_ITER = 2**40
SAMPLE_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class OracleReport:
    ap_distance: float
    iterations: int
    converged: bool
    p: np.ndarray
    q: np.ndarray
    sample_min: float | None = None
    agreement: bool | None = None


def orthonormal_basis(directions, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal columns spanning the column space of ``directions``.

    Modified Gram-Schmidt with one reorthogonalization pass.  Columns whose
    residual is at most ``tol * max(1, ||column||)`` are skipped.
    """
    D = np.asarray(directions, dtype=float)
    m = D.shape[0]
    basis: list[np.ndarray] = []
    for j in range(D.shape[1]):
        w = D[:, j].copy()
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        res = np.linalg.norm(w)
        if res > tol * max(1.0, np.linalg.norm(D[:, j])):
            basis.append(w / res)
    if not basis:
        return np.zeros((m, 0))
    return np.column_stack(basis)


def _sweep_map(Vb: Flat, Vc: Flat, tol: float):
    """One sweep ``p -> P_b(P_c(p))`` as an affine map ``p -> M p + t``."""
    Qb = orthonormal_basis(Vb.directions, tol)
    Qc = orthonormal_basis(Vc.directions, tol)
    Pb, Pc = Qb @ Qb.T, Qc @ Qc.T
    b, c = Vb.base, Vc.base
    M = Pb @ Pc
    t = b + Pb @ (c - b) - M @ c
    return M, t, Pc


def alternating_projections(
    Vb: Flat,
    Vc: Flat,
    max_iter: int = DEFAULT_MAX_ITER,
    eps: float = 1e-14,
    tol: float = DEFAULT_RANK_TOL,
    doubling: bool = True,
) -> OracleReport:
    """Alternate projections onto ``Vc`` then ``Vb``, starting at ``Vb.base``.

    After a sweep the estimate is the gap between ``p`` (on ``Vb``) and its
    projection ``q`` onto ``Vc``.  The run stops once the estimate changes by
    at most ``eps * max(1, gap)`` or ``p`` stops moving; exhausting
    ``max_iter`` sweeps is reported as ``converged=False``.

    With ``doubling`` the sweep map is squared after every round, so round
    ``k`` advances ``2**k`` sweeps at once.  The iterates are the same as
    with plain sweeping; only the ones reported are spaced out.  Flats whose
    direction spaces meet at a small principal angle ``theta`` contract by
    ``cos(theta)**2`` per sweep and need ~``1/theta**2`` sweeps.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    M, t, Pc = _sweep_map(Vb, Vc, tol)
    c = Vc.base

    def project_c(x):
        return c + Pc @ (x - c)

    p = Vb.base.copy()
    prev = np.inf
    done, steps = 0, 1
    powers = []  # (steps, M^steps, translation) for finishing a partial round
    while True:
        if done + steps > max_iter:
            for n_steps, Mk, tk in reversed(powers):
                while done + n_steps <= max_iter:
                    p = Mk @ p + tk
                    done += n_steps
            q = project_c(p)
            return OracleReport(float(np.linalg.norm(p - q)), done, False, p, q)
        p_new = M @ p + t
        done += steps
        q = project_c(p_new)
        gap = float(np.linalg.norm(p_new - q))
        settled = np.linalg.norm(p_new - p) <= eps * max(1.0, float(np.linalg.norm(p)))
        p = p_new
        if gap <= eps or abs(prev - gap) <= eps * max(1.0, gap) or settled:
            return OracleReport(gap, done, True, p, q)
        prev = gap
        if doubling:
            powers.append((steps, M, t))
            M, t = M @ M, M @ t + t
            steps *= 2


def sampled_upper_bound(
    Vb: Flat, Vc: Flat, samples: int = 10_000, seed: int = 0, box: float = 10.0
) -> float:
    """Smallest ``||p - q||`` over random points of both flats.

    Coefficients are drawn uniformly from ``[-box, box]`` with a seeded
    generator, so the result is reproducible and never below the distance.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = np.inf
    chunk = 4096
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        U = rng.uniform(-box, box, (size, Vb.k))
        V = rng.uniform(-box, box, (size, Vc.k))
        P = Vb.base + Vb.sign * U @ Vb.directions.T
        Q = Vc.base + Vc.sign * V @ Vc.directions.T
        best = min(best, float(np.min(np.linalg.norm(P - Q, axis=1))))
    return best


def cross_check(
    Vb: Flat,
    Vc: Flat,
    distance: float,
    max_iter: int = DEFAULT_MAX_ITER,
    eps: float = 1e-14,
    samples: int = 10_000,
    seed: int = 0,
    tol: float = DEFAULT_RANK_TOL,
) -> OracleReport:
    """Run both oracles and compare them with a solver ``distance``."""
    ap = alternating_projections(Vb, Vc, max_iter, eps, tol)
    smin = sampled_upper_bound(Vb, Vc, samples, seed)
    ok = (
        abs(ap.ap_distance - distance) <= AP_AGREEMENT_TOL * max(1.0, distance)
        and smin >= distance - SAMPLE_SLACK
    )
    return OracleReport(ap.ap_distance, ap.iterations, ap.converged, ap.p, ap.q, smin, ok)
