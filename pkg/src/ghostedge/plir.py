"""Projected Landweber iteration with a precomputed pseudo-inverse.

The update ``x + omega * pinv(A^T A) A^T (y - A x)`` is evaluated through the
identity ``pinv(A^T A) A^T == pinv(A)``, using a thin SVD of the ``M x K``
sensing matrix rather than the ``K x K`` normal matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DegenerateMatrixError, ParameterError, PatternStack, ShapeError, as_measurements

DEFAULT_OMEGA = 1.5
DEFAULT_RANK_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class PlirOperator:
    """Sensing matrix together with its truncated thin SVD.

    Attributes
    ----------
    matrix : ndarray, shape (M, K)
    u : ndarray, shape (M, rank)
    singular_values : ndarray, shape (rank,)
        Descending, all strictly above ``rank_cutoff * singular_values[0]``.
    v : ndarray, shape (K, rank)
    omega : float
        Gain applied to each pseudo-inverse correction.
    """

    matrix: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    singular_values: np.ndarray
    v: np.ndarray = field(repr=False)
    omega: float = DEFAULT_OMEGA
    rank_cutoff: float = DEFAULT_RANK_CUTOFF

    @property
    def rank(self) -> int:
        return self.singular_values.size

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def pinv_action(self, y) -> np.ndarray:
        """``A^+ y = V diag(1/s) U^T y``."""
        y = np.asarray(y, dtype=np.float64)
        return self.v @ ((self.u.T @ y) / self.singular_values)

    def pinv_matrix(self) -> np.ndarray:
        """Dense ``K x M`` pseudo-inverse; for tests and small problems."""
        return (self.v / self.singular_values) @ self.u.T


def build_operator(patterns: PatternStack | np.ndarray, omega: float = DEFAULT_OMEGA,
                   rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> PlirOperator:
    """Factor the sensing matrix of ``patterns`` for repeated Landweber steps.

    ``patterns`` may also be a ready ``(M, K)`` matrix.
    """
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}")
    if not 0 <= rank_cutoff < 1:
        raise ParameterError(f"rank_cutoff must lie in [0, 1), got {rank_cutoff}")
    if isinstance(patterns, PatternStack):
        a = patterns.flatten()
    else:
        a = np.array(patterns, dtype=np.float64)
        if a.ndim != 2:
            raise ShapeError(f"sensing matrix must be 2-D, got shape {a.shape}")
    if not np.any(a):
        raise DegenerateMatrixError("sensing matrix is all zeros")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = s > rank_cutoff * s[0]
    u, s, v = u[:, keep], s[keep], vt[keep].T
    for arr in (a, u, s, v):
        arr.flags.writeable = False
    return PlirOperator(a, np.ascontiguousarray(u), s, np.ascontiguousarray(v),
                        float(omega), float(rank_cutoff))


def residual_norm(op: PlirOperator, x: np.ndarray, y) -> float:
    return float(np.linalg.norm(as_measurements(y) - op.forward(x)))


def plir_step(op: PlirOperator, x_prev, y, clamp: bool = True) -> np.ndarray:
    """One projected Landweber update; the projection clips pixels to ``[0, 1]``."""
    x_prev = np.asarray(x_prev, dtype=np.float64)
    y = as_measurements(y)
    m, k = op.shape
    if x_prev.shape != (k,):
        raise ShapeError(f"x_prev must have shape ({k},), got {x_prev.shape}")
    if y.shape != (m,):
        raise ShapeError(f"y must have length {m}, got {y.size}")
    x = x_prev + op.omega * op.pinv_action(y - op.forward(x_prev))
    if clamp:
        np.clip(x, 0.0, 1.0, out=x)
    return x
