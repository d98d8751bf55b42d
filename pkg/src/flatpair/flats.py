"""Affine subspaces in generator form and assembly of the least-squares data.

A flat is stored as a base point plus a matrix of direction columns.  The
``orientation`` tag records the sign in front of the directions:

* ``"plus"``:  points are ``base + D t``  (the first flat, ``b + B u``)
* ``"minus"``: points are ``base - D t``  (the second flat, ``c - C v``)

Directions are never negated on input, so coefficients reported by the
solver stay in the caller's parameterization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import DimensionError
from .linalg import DEFAULT_RANK_TOL, as_matrix, as_vector, norm, numerical_rank

Orientation = Literal["plus", "minus"]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Flat:
    base: np.ndarray
    directions: np.ndarray
    orientation: Orientation = "plus"

    def __post_init__(self):
        base = as_vector(self.base, "base")
        dirs = as_matrix(self.directions, rows=base.size, name="directions")
        if self.orientation not in ("plus", "minus"):
            raise ValueError(f"orientation must be 'plus' or 'minus', not {self.orientation!r}")
        object.__setattr__(self, "base", _frozen(base))
        object.__setattr__(self, "directions", _frozen(dirs))

    @classmethod
    def from_columns(cls, base, columns, orientation: Orientation = "plus") -> "Flat":
        """Build a flat from a list of direction vectors (possibly empty)."""
        base = as_vector(base, "base")
        columns = list(columns)
        if not columns:
            dirs = np.zeros((base.size, 0))
        else:
            lengths = {len(c) for c in columns}
            if lengths != {base.size}:
                raise DimensionError(
                    f"direction columns have lengths {sorted(lengths)}, base has {base.size}"
                )
            dirs = np.column_stack([np.asarray(c, dtype=float) for c in columns])
        return cls(base, dirs, orientation)

    @property
    def ambient_dim(self) -> int:
        return self.base.size

    @property
    def k(self) -> int:
        """Number of direction columns."""
        return self.directions.shape[1]

    @property
    def sign(self) -> float:
        return 1.0 if self.orientation == "plus" else -1.0

    def point(self, t) -> np.ndarray:
        """The point ``base +/- D t`` for coefficient vector ``t``."""
        t = np.asarray(t, dtype=float).reshape(self.k)
        return self.base + self.sign * (self.directions @ t)

    def __repr__(self):
        return f"Flat(m={self.ambient_dim}, k={self.k}, orientation={self.orientation!r})"


@dataclass(frozen=True)
class FlatDiagnostics:
    kept_columns: tuple[int, ...]
    dropped_columns: tuple[int, ...]
    rank: int

    @property
    def dropped(self) -> bool:
        return bool(self.dropped_columns)


def validate(f: Flat, tol: float = DEFAULT_RANK_TOL) -> tuple[Flat, FlatDiagnostics]:
    """Drop direction columns of norm ``<= tol``; record the flat's rank.

    Duplicate or dependent columns are kept; rank handling belongs to the
    solver.  The represented point set is unchanged.
    """
    if f.directions.shape[0] != f.base.size:
        raise DimensionError("base and directions disagree on the ambient dimension")
    norms = [norm(f.directions[:, j]) for j in range(f.k)]
    kept = tuple(j for j, nj in enumerate(norms) if nj > tol)
    dropped = tuple(j for j, nj in enumerate(norms) if nj <= tol)
    out = f if not dropped else Flat(f.base, f.directions[:, list(kept)], f.orientation)
    rank, _ = numerical_rank(out.directions, tol)
    return out, FlatDiagnostics(kept, dropped, rank)


def contains(f: Flat, p, tol: float = 1e-8) -> bool:
    """Whether ``p`` lies on ``f`` up to a relative residual of ``tol``."""
    p = as_vector(p, "point")
    if p.size != f.ambient_dim:
        raise DimensionError(f"point has dimension {p.size}, flat lives in R^{f.ambient_dim}")
    offset = p - f.base
    if f.k == 0:
        return norm(offset) <= tol
    t, *_ = np.linalg.lstsq(f.directions, offset, rcond=None)
    residual = offset - f.directions @ t
    return norm(residual) <= tol * max(1.0, norm(offset))


@dataclass(frozen=True, eq=False)
class ProblemData:
    """Data of ``min_x ||A x - d||`` for a pair of flats.

    ``A = [B C]`` with the first ``split`` columns taken from the first flat,
    and ``d = c - b``.
    """

    A: np.ndarray
    d: np.ndarray
    split: int
    column_origin: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]


def difference_setup(Vb: Flat, Vc: Flat) -> ProblemData:
    if Vb.ambient_dim != Vc.ambient_dim:
        raise DimensionError(
            f"flats live in R^{Vb.ambient_dim} and R^{Vc.ambient_dim}"
        )
    A = np.hstack([Vb.directions, Vc.directions])
    d = Vc.base - Vb.base
    origin = ("from_B",) * Vb.k + ("from_C",) * Vc.k
    return ProblemData(_frozen(A), _frozen(d), Vb.k, origin)
