"""Independent oracles and random instance generators for the test suite.

Nothing here calls the Gram/Cramer machinery under test.
"""
from itertools import permutations

import numpy as np

from flatpair.flats import Flat


def cofactor_det(M):
    """Determinant by recursive cofactor expansion along the first row."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 1:
        return float(M[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(M[1:], j, axis=1)
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total


def leibniz_det(M):
    """Determinant as a signed sum over permutations (n <= 4 only)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    total = 0.0
    for perm in permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1.0) ** inversions
        for i, p in enumerate(perm):
            term *= M[i, p]
        total += term
    return total


def lstsq_projection(A, d):
    """Orthogonal projection of d onto Range(A) via an SVD least-squares solve."""
    if A.shape[1] == 0:
        return np.zeros_like(d)
    x, *_ = np.linalg.lstsq(A, d, rcond=None)
    return A @ x


def qr_distance(Vb, Vc):
    """Distance between flats from the QR-based projection residual."""
    A = np.hstack([Vb.directions, Vc.directions])
    d = Vc.base - Vb.base
    return float(np.linalg.norm(d - lstsq_projection(A, d)))


def random_full_rank_instance(rng, m_min=2, m_max=12, n_max=8):
    """Random pair of flats with entries uniform in [-1, 1] and n <= min(m, n_max)."""
    m = int(rng.integers(m_min, m_max + 1))
    n = int(rng.integers(1, min(m, n_max) + 1))
    l1 = int(rng.integers(0, n + 1))
    Vb = Flat(rng.uniform(-1, 1, m), rng.uniform(-1, 1, (m, l1)), "plus")
    Vc = Flat(rng.uniform(-1, 1, m), rng.uniform(-1, 1, (m, n - l1)), "minus")
    return Vb, Vc


def random_deficient_instance(rng):
    """Pair of flats whose stacked directions are rank deficient by construction."""
    m = int(rng.integers(2, 9))
    kind = rng.integers(0, 4)
    b = rng.uniform(-1, 1, m)
    c = rng.uniform(-1, 1, m)
    if kind == 0:
        # parallel flats: shared direction space
        k = int(rng.integers(1, m))
        D = rng.uniform(-1, 1, (m, k))
        Vb, Vc = Flat(b, D, "plus"), Flat(c, D @ rng.uniform(-1, 1, (k, k)), "minus")
    elif kind == 1:
        # one column of C is a combination of B's columns
        k = int(rng.integers(1, m))
        B = rng.uniform(-1, 1, (m, k))
        C = np.column_stack([B @ rng.uniform(-1, 1, k), rng.uniform(-1, 1, m)])
        Vb, Vc = Flat(b, B, "plus"), Flat(c, C, "minus")
    elif kind == 2:
        # a zero direction column
        B = np.column_stack([rng.uniform(-1, 1, m), np.zeros(m)])
        Vb, Vc = Flat(b, B, "plus"), Flat(c, rng.uniform(-1, 1, (m, 1)), "minus")
    else:
        # more columns than the ambient dimension
        Vb = Flat(b, rng.uniform(-1, 1, (m, m)), "plus")
        Vc = Flat(c, rng.uniform(-1, 1, (m, 2)), "minus")
    return Vb, Vc


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.standard_normal((m, m)))
    return Q * np.sign(np.diag(R))


def moved(f, Q, t):
    """Image of a flat under the rigid motion x -> Q x + t."""
    return Flat(Q @ f.base + t, Q @ f.directions, f.orientation)


def skew_lines():
    return (Flat([0, 0, 0], [[1], [0], [0]], "plus"),
            Flat([0, 0, 1], [[0], [1], [0]], "minus"))


def point_plane():
    return (Flat([0, 0, 5], np.zeros((3, 0)), "plus"),
            Flat([0, 0, 0], [[1, 0], [0, 1], [0, 0]], "minus"))


def parallel_planes():
    return (Flat([0, 0, 0], [[1, 0], [0, 1], [0, 0]], "plus"),
            Flat([0, 0, 2], [[1, 0], [0, 1], [0, 0]], "minus"))


def crossing_lines():
    return Flat([0, 0], [[1], [0]], "plus"), Flat([0, 0], [[0], [1]], "minus")


def identical_lines():
    return Flat([0, 0, 0], [[1], [0], [0]], "plus"), Flat([0, 0, 0], [[1], [0], [0]], "minus")
