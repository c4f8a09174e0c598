"""Minimum-norm point of a convex hull by a primal active-set QP.

Given points c_1..c_k in R^m, find y = P_conv{c_j}(0) together with
simplex multipliers.  The solver keeps an active set J of affinely
independent points, the thin QR factorization of the difference columns
[c_j - c_pivot], and the current iterate y = sum_j lambda_j c_j.  Each
outer iteration brings in the most-violated point (smallest y^T c_j) and
runs an inner loop of affine projections and ratio tests until the new
point is absorbed; the iterate norm strictly decreases across outer
iterations until optimality.

States are resumable: a solved state can be extended with fresh points and
re-solved, which is how the feasibility solver reuses work across its own
iterations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateColumn, DimensionMismatch
from .linalg import QrState, check_matrix, qr_from_columns, solve_triangular

OPTIMAL = "optimal"
BUDGET = "budget"


@dataclass
class QpConfig:
    """Tolerances and budgets for the active-set QP.

    ``enter_tol`` is relative to ||y||^2: a point enters only when
    y^T c_j < ||y||^2 (1 - enter_tol).  Budgets of None mean unbounded;
    a finite ``max_inner`` lets a caller abort the QP early and still hold
    a valid (improved) state.
    """

    enter_tol: float = 1e-12
    max_outer: Optional[int] = None
    max_inner: Optional[int] = None
    rank_tol: float = 1e-10

    def __post_init__(self):
        if self.enter_tol < 0 or self.rank_tol < 0:
            raise ValueError("tolerances must be nonnegative")


class MinNormState:
    """Live state of the active-set QP (single-owner, mutable).

    Attributes
    ----------
    points : (k, m) array of hull generators.
    lam : (k,) simplex multipliers; positive exactly on the active set.
    active : ordered active indices; the first entry is the QR pivot.
    qr : QrState of the columns points[j] - points[active[0]], j in active[1:].
    y : current iterate, equal to lam @ points.
    """

    def __init__(self, points, lam, active, qr, y, inner_count=0, outer_count=0,
                 norm_history=None):
        self.points = points
        self.lam = lam
        self.active = active
        self.qr = qr
        self.y = y
        self.inner_count = inner_count
        self.outer_count = outer_count
        self.norm_history = [float(np.linalg.norm(y))] if norm_history is None else norm_history

    @classmethod
    def cold_start(cls, points, start=None, rank_tol=1e-10) -> "MinNormState":
        points = check_matrix(np.atleast_2d(np.asarray(points, dtype=float)))
        k, m = points.shape
        if k < 1:
            raise ValueError("need at least one point")
        if start is None:
            j0 = int(np.argmin(np.linalg.norm(points, axis=1)))
        else:
            j0 = int(start)
            if not 0 <= j0 < k:
                raise IndexError(f"start index {j0} not in [0, {k})")
        lam = np.zeros(k)
        lam[j0] = 1.0
        return cls(points, lam, [j0], QrState(m, rank_tol), points[j0].copy())

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.lam > 0.0)

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.y))

    def warm_extend(self, points) -> "MinNormState":
        """Resume on a longer point list whose prefix matches this state's."""
        points = check_matrix(np.atleast_2d(np.asarray(points, dtype=float)))
        if points.shape[0] < self.k or points.shape[1] != self.m:
            raise DimensionMismatch("warm start needs the prior points as a prefix")
        if not np.array_equal(points[: self.k], self.points):
            raise ValueError("warm start points do not extend the prior state")
        lam = np.zeros(points.shape[0])
        lam[: self.k] = self.lam
        return MinNormState(points, lam, list(self.active), self.qr.copy(),
                            self.y.copy(), self.inner_count, self.outer_count,
                            list(self.norm_history))

    def compact(self) -> "MinNormState":
        """Drop zero-weight points, preserving list order and the QR factors."""
        keep = sorted(self.active)
        remap = {old: new for new, old in enumerate(keep)}
        return MinNormState(self.points[keep], self.lam[keep],
                            [remap[j] for j in self.active], self.qr,
                            self.y, self.inner_count, self.outer_count,
                            self.norm_history)

    def check_invariants(self, tol=1e-8):
        """Raise AssertionError when a state invariant is violated (test hook)."""
        assert np.all(self.lam >= 0.0)
        assert abs(self.lam.sum() - 1.0) <= 1e-9
        assert set(self.support) == set(self.active)
        assert len(self.active) <= self.m + 1
        scale = max(1.0, float(np.max(np.abs(self.points))))
        assert np.linalg.norm(self.lam @ self.points - self.y) <= 1e-9 * scale
        if self.qr.k:
            q = self.qr.q_factor
            assert np.linalg.norm(q.T @ q - np.eye(self.qr.k)) <= 1e-8
            pivot = self.points[self.active[0]]
            diffs = np.column_stack([self.points[j] - pivot for j in self.active[1:]])
            assert np.linalg.norm(q @ self.qr.r_factor - diffs) <= 1e-8 * max(1.0, np.linalg.norm(diffs))
        prods = self.points[self.active] @ self.y
        if len(prods) > 1:
            assert np.max(prods) - np.min(prods) <= tol * max(1.0, float(self.y @ self.y))


def project_affine_hull(points, qr: QrState):
    """Project the origin onto the affine hull of ``points``.

    ``qr`` must factor the difference columns [c_j - c_last] of the given
    points (the last point is the base).  Returns the projection y' and
    affine weights lambda' summing to one (entries may be negative).
    """
    points = check_matrix(np.atleast_2d(np.asarray(points, dtype=float)))
    k = points.shape[0]
    if qr.k != k - 1:
        raise DimensionMismatch("qr must factor the k-1 difference columns")
    base = points[-1]
    if k == 1:
        return base.copy(), np.ones(1)
    gamma = solve_triangular(qr.r_factor, -(qr.q_factor.T @ base))
    lamp = np.empty(k)
    lamp[: k - 1] = gamma
    lamp[k - 1] = 1.0 - gamma.sum()
    return lamp @ points, lamp


def ratio_test(lam_current, lam_target):
    """Largest step t in (0, 1] keeping lam_current + t (target - current) >= 0.

    Returns (t_bar, leaving) where leaving is the smallest index whose
    blended weight hits zero when t_bar < 1, else None.
    """
    cur = np.asarray(lam_current, dtype=float)
    tgt = np.asarray(lam_target, dtype=float)
    if cur.shape != tgt.shape:
        raise DimensionMismatch("weight vectors must have equal length")
    d = tgt - cur
    dec = np.flatnonzero(d < 0.0)
    if dec.size == 0:
        return 1.0, None
    ratios = cur[dec] / -d[dec]
    tmin = float(ratios.min())
    if tmin >= 1.0:
        return 1.0, None
    leaving = int(dec[np.flatnonzero(ratios == tmin)[0]])
    return max(tmin, 0.0), leaving


def _affine_step(state: MinNormState):
    """Affine projection over the current active set, in state index space."""
    pts = state.points
    active = state.active
    base = pts[active[0]]
    if len(active) == 1:
        lamp_active = np.ones(1)
    else:
        gamma = solve_triangular(state.qr.r_factor, -(state.qr.q_factor.T @ base))
        lamp_active = np.empty(len(active))
        lamp_active[0] = 1.0 - gamma.sum()
        lamp_active[1:] = gamma
    lamp = np.zeros(state.k)
    lamp[active] = lamp_active
    yp = lamp_active @ pts[active]
    return yp, lamp


def _drop_active(state: MinNormState, j):
    """Remove point j from the active set, updating or rebuilding the QR."""
    pos = state.active.index(j)
    state.active.pop(pos)
    if pos == 0:
        # Pivot left: every difference column changes, so refactor.
        pivot = state.points[state.active[0]]
        state.qr = qr_from_columns(
            [state.points[i] - pivot for i in state.active[1:]],
            ambient_dim=state.m, rank_tol=state.qr.rank_tol)
    else:
        state.qr.remove_column(pos - 1)


def _resolve(state: MinNormState):
    """Project onto the active set, dropping blocking points, until t = 1.

    On return the state sits at an outer-iteration boundary: y is the
    projection of the origin onto the convex hull of the active points and
    every active multiplier is positive.
    """
    while True:
        state.inner_count += 1
        yp, lamp = _affine_step(state)
        tbar, leaving = ratio_test(state.lam, lamp)
        if tbar == 1.0:
            state.lam = lamp
            state.y = yp
            # Degenerate landings (weight exactly zero) leave immediately.
            for j in [j for j in state.active if lamp[j] <= 0.0]:
                if len(state.active) > 1:
                    state.lam[j] = 0.0
                    _drop_active(state, j)
            return
        state.lam = state.lam + tbar * (lamp - state.lam)
        state.lam[leaving] = 0.0
        np.clip(state.lam, 0.0, None, out=state.lam)
        state.y = state.y + tbar * (yp - state.y)
        _drop_active(state, leaving)


def _enter_point(state: MinNormState, jstar) -> bool:
    """Inner loop: try to absorb candidate ``jstar`` into the active set.

    Returns False when the candidate is affinely dependent on the active
    set (nothing changes) or gets expelled during the resolve loop; either
    way the state is left at a valid boundary and the caller should block
    the candidate.
    """
    pivot = state.points[state.active[0]]
    try:
        state.qr.insert_column(state.points[jstar] - pivot)
    except DegenerateColumn:
        return False
    state.active.append(jstar)
    _resolve(state)
    return jstar in state.active


def qp_step(state: MinNormState, config: QpConfig = None) -> bool:
    """One outer iteration of the active-set QP.

    Picks the most-violated entering index and runs the inner loop to
    absorb it.  Returns True on progress (norm strictly decreased) and
    False when no admissible entering index exists, i.e. the state is
    already optimal at tolerance.  Candidates whose difference column is
    affinely dependent on the active set are blocked for this step and the
    next-most-violated index is tried.
    """
    config = config or QpConfig()
    ysq = float(state.y @ state.y)
    thresh = ysq - config.enter_tol * ysq
    vals = state.points @ state.y
    violating = np.flatnonzero(vals < thresh)
    blocked = set(state.active)
    while True:
        cand = [j for j in violating if j not in blocked]
        if not cand:
            return False
        jstar = int(min(cand, key=lambda j: (vals[j], j)))
        if _enter_point(state, jstar):
            state.outer_count += 1
            state.norm_history.append(state.distance)
            return True
        blocked.add(jstar)


def min_norm_point(points, start=None, config: QpConfig = None):
    """Project the origin onto conv(points).

    Parameters
    ----------
    points : (k, m) array-like of hull generators.
    start : None, an index for the initial vertex, or a prior MinNormState
        whose point list is a prefix of ``points`` (warm start).  By
        default the minimum-norm point starts.
    config : QpConfig with tolerances and optional budgets.

    Returns
    -------
    (state, status) where status is OPTIMAL or BUDGET.  On OPTIMAL,
    state.y is the projection and state.lam certifies it; on BUDGET the
    state is still a valid projection onto the convex hull of its active
    set, with norm no larger than at entry.
    """
    config = config or QpConfig()
    if isinstance(start, MinNormState):
        state = start.warm_extend(points)
    else:
        state = MinNormState.cold_start(points, start, config.rank_tol)
    base_outer = state.outer_count
    base_inner = state.inner_count
    # Finite termination is guaranteed in exact arithmetic; the failsafe
    # only guards against floating-point cycling on adversarial data.
    failsafe = 1000 + 100 * state.k
    while True:
        done_outer = state.outer_count - base_outer
        if config.max_outer is not None and done_outer >= config.max_outer:
            return state, BUDGET
        if config.max_inner is not None and state.inner_count - base_inner >= config.max_inner:
            return state, BUDGET
        if done_outer >= failsafe:
            return state, BUDGET
        if not qp_step(state, config):
            return state, OPTIMAL
