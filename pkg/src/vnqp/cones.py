"""Cone descriptions and the linear-minimization oracle.

A problem instance is a matrix A together with a cone K (a direct sum of
nonnegative orthant blocks) and a strictly positive normalizing functional
u_bar.  The oracle minimizes ``p^T A^T y`` over the compact slice
``{p in K : u_bar^T p = 1}``; for orthant products the minimizer is a
scaled elementary vector ``e_j / u_bar_j`` at the index with the smallest
normalized inner product.  A strictly positive oracle value certifies that
``A^T y`` lies in the interior of the dual cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .linalg import check_matrix, check_vector


@dataclass
class ConeSpec:
    """Direct sum of nonnegative orthant blocks with functional u_bar."""

    blocks: tuple
    u_bar: np.ndarray

    def __post_init__(self):
        self.blocks = tuple(int(b) for b in self.blocks)
        if any(b < 1 for b in self.blocks):
            raise ValueError("block dimensions must be positive")
        self.u_bar = check_vector(self.u_bar)
        if sum(self.blocks) != self.u_bar.shape[0]:
            raise DimensionMismatch("block dimensions must sum to len(u_bar)")
        if np.any(self.u_bar <= 0.0):
            raise ValueError("u_bar must be strictly positive (interior of the dual cone)")

    @property
    def dim(self) -> int:
        return self.u_bar.shape[0]


def orthant(n, u_bar=None) -> ConeSpec:
    """The nonnegative orthant R_+^n, by default with u_bar = 1."""
    if u_bar is None:
        u_bar = np.ones(n)
    return ConeSpec(blocks=(n,), u_bar=u_bar)


@dataclass
class ConeProblem:
    """Matrix A (m x n) paired with the cone slice its columns generate."""

    a: np.ndarray
    cone: ConeSpec = None

    def __post_init__(self):
        self.a = check_matrix(self.a)
        if self.cone is None:
            self.cone = orthant(self.a.shape[1])
        if self.cone.dim != self.a.shape[1]:
            raise DimensionMismatch("cone dimension must equal the column count of A")

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]


def lmo_index(problem: ConeProblem, y) -> tuple:
    """Index form of the oracle: (argmin index, value, A^T y).

    Ties break to the smallest index (np.argmin convention), which keeps
    traces reproducible.
    """
    y = check_vector(y, problem.m)
    aty = problem.a.T @ y
    ratios = aty / problem.cone.u_bar
    j = int(np.argmin(ratios))
    return j, float(ratios[j]), aty


def cone_lmo(problem: ConeProblem, y) -> tuple:
    """Minimize p^T A^T y over {u_bar^T p = 1, p in K}.

    Returns the minimizing point p (a scaled elementary vector for orthant
    products) and the attained value.
    """
    j, value, _ = lmo_index(problem, y)
    p = np.zeros(problem.n)
    p[j] = 1.0 / problem.cone.u_bar[j]
    return p, value


def dual_certificate(problem: ConeProblem, y, margin=0.0) -> bool:
    """True iff the oracle value at y strictly exceeds ``margin``.

    For orthant products this is exactly min_j (A^T y)_j / u_bar_j > margin,
    which certifies that y solves the dual-interior system.
    """
    _, value, _ = lmo_index(problem, y)
    return value > margin
