"""Dense kernels: an incrementally updatable thin QR factorization.

The QR state stores a set of columns together with factors Q (orthonormal)
and R (upper triangular, positive diagonal).  Columns can be appended or
deleted one at a time; appends use Gram-Schmidt with reorthogonalization,
deletions restore triangularity with Givens rotations.  This is the
workhorse behind the affine-hull projections of the min-norm QP, where the
factored columns are differences of active hull points.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DegenerateColumn, DimensionMismatch, IndexOutOfRange, SingularTriangle

DEFAULT_RANK_TOL = 1e-10
SINGULAR_DIAG_TOL = 1e-12


def check_matrix(a) -> np.ndarray:
    """Validate and return a 2-D float array with finite entries."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def check_vector(v, length=None) -> np.ndarray:
    """Validate and return a 1-D float array, optionally of fixed length."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D array, got ndim={v.ndim}")
    if length is not None and v.shape[0] != length:
        raise DimensionMismatch(f"expected length {length}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains NaN or Inf entries")
    return v


class QrState:
    """Thin QR factorization of a growing/shrinking column set.

    Parameters
    ----------
    ambient_dim : int
        Length of every stored column (rows of Q).
    rank_tol : float
        Relative threshold below which a new column counts as affinely
        dependent on the stored ones and is refused.
    """

    def __init__(self, ambient_dim, rank_tol=DEFAULT_RANK_TOL):
        if ambient_dim < 1:
            raise ValueError("ambient_dim must be positive")
        self.ambient_dim = int(ambient_dim)
        self.rank_tol = float(rank_tol)
        self._cols = np.empty((self.ambient_dim, 0))
        self._q = np.empty((self.ambient_dim, 0))
        self._r = np.empty((0, 0))

    @property
    def k(self) -> int:
        return self._cols.shape[1]

    @property
    def cols(self) -> np.ndarray:
        return self._cols

    @property
    def q_factor(self) -> np.ndarray:
        return self._q

    @property
    def r_factor(self) -> np.ndarray:
        return self._r

    def copy(self) -> "QrState":
        out = QrState(self.ambient_dim, self.rank_tol)
        out._cols = self._cols.copy()
        out._q = self._q.copy()
        out._r = self._r.copy()
        return out

    def insert_column(self, column) -> None:
        """Append one column, updating the factors in place.

        Raises DegenerateColumn (leaving the state untouched) when the new
        column adds nothing to the current span; a thin factorization in
        R^m can hold at most m columns, so insertion at k == m always
        degenerates.
        """
        v = check_vector(column, self.ambient_dim)
        scale = np.linalg.norm(v)
        if self.k >= self.ambient_dim:
            raise DegenerateColumn("column set already spans the ambient space")
        # Gram-Schmidt with one reorthogonalization pass; enough for the
        # orthogonality levels the update sequences are specified to keep.
        w = self._q.T @ v
        res = v - self._q @ w
        w2 = self._q.T @ res
        res = res - self._q @ w2
        w = w + w2
        rho = np.linalg.norm(res)
        if rho <= self.rank_tol * max(scale, 1e-300):
            raise DegenerateColumn("column is affinely dependent on the stored set")
        k = self.k
        new_r = np.zeros((k + 1, k + 1))
        new_r[:k, :k] = self._r
        new_r[:k, k] = w
        new_r[k, k] = rho
        self._q = np.hstack([self._q, (res / rho)[:, None]])
        self._r = new_r
        self._cols = np.hstack([self._cols, v[:, None]])

    def remove_column(self, index) -> None:
        """Delete the column at ``index``, restoring triangular R via Givens."""
        index = int(index)
        if not 0 <= index < self.k:
            raise IndexOutOfRange(f"column index {index} not in [0, {self.k})")
        k = self.k
        r = np.delete(self._r, index, axis=1)
        q = self._q.copy()
        for i in range(index, k - 1):
            a, b = r[i, i], r[i + 1, i]
            rad = np.hypot(a, b)
            if rad == 0.0:
                c, s = 1.0, 0.0
            else:
                c, s = a / rad, b / rad
            gi, gj = r[i, :].copy(), r[i + 1, :].copy()
            r[i, :] = c * gi + s * gj
            r[i + 1, :] = -s * gi + c * gj
            qi, qj = q[:, i].copy(), q[:, i + 1].copy()
            q[:, i] = c * qi + s * qj
            q[:, i + 1] = -s * qi + c * qj
        r = r[: k - 1, :]
        q = q[:, : k - 1]
        # Positive-diagonal sign convention keeps remove/reinsert deterministic.
        for i in range(k - 1):
            if r[i, i] < 0.0:
                r[i, :] = -r[i, :]
                q[:, i] = -q[:, i]
        self._r = r
        self._q = q
        self._cols = np.delete(self._cols, index, axis=1)


def qr_insert_column(state: QrState, column) -> QrState:
    """Functional insert: return a new state with ``column`` appended."""
    out = state.copy()
    out.insert_column(column)
    return out


def qr_remove_column(state: QrState, index) -> QrState:
    """Functional remove: return a new state without column ``index``."""
    out = state.copy()
    out.remove_column(index)
    return out


def qr_from_columns(columns, ambient_dim=None, rank_tol=DEFAULT_RANK_TOL) -> QrState:
    """Factor a full column list by repeated insertion."""
    columns = [check_vector(c) for c in columns]
    if ambient_dim is None:
        if not columns:
            raise ValueError("ambient_dim required for an empty column list")
        ambient_dim = columns[0].shape[0]
    state = QrState(ambient_dim, rank_tol)
    for c in columns:
        state.insert_column(c)
    return state


def solve_triangular(r_factor, rhs, diag_tol=SINGULAR_DIAG_TOL) -> np.ndarray:
    """Back-substitution for an upper-triangular system R x = rhs."""
    r = check_matrix(r_factor)
    if r.shape[0] != r.shape[1]:
        raise DimensionMismatch("triangular factor must be square")
    b = check_vector(rhs, r.shape[0])
    if r.shape[0] == 0:
        return np.empty(0)
    if np.min(np.abs(np.diag(r))) <= diag_tol:
        raise SingularTriangle("diagonal entry below threshold")
    return scipy.linalg.solve_triangular(r, b, lower=False)
