"""Small dense convex QP solver (operator splitting with active-set polish).

Solves  minimize   1/2 x' diag(q) x + c' x
        subject to A x <= b,  x >= lb   (lb entries may be -inf)

Problem sizes here are tiny (at most a few hundred variables), so a dense
ADMM iteration with a one-off Cholesky factorization is plenty, and a final
KKT solve on the identified active set sharpens the solution to near machine
precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

RIDGE = 1e-10  # replaces zero curvature so the minimizer is unique


@dataclass
class QpProblem:
    quadratic_diag: np.ndarray      # (n,), >= 0
    linear_cost: np.ndarray         # (n,)
    inequality_matrix: np.ndarray   # (m, n)
    inequality_rhs: np.ndarray      # (m,)
    variable_lower_bounds: np.ndarray  # (n,), -inf where unbounded

    def __post_init__(self):
        self.quadratic_diag = np.asarray(self.quadratic_diag, dtype=float).ravel()
        self.linear_cost = np.asarray(self.linear_cost, dtype=float).ravel()
        self.inequality_matrix = np.atleast_2d(
            np.asarray(self.inequality_matrix, dtype=float))
        self.inequality_rhs = np.asarray(self.inequality_rhs, dtype=float).ravel()
        self.variable_lower_bounds = np.asarray(
            self.variable_lower_bounds, dtype=float).ravel()
        n = self.quadratic_diag.size
        if self.inequality_matrix.size == 0:
            self.inequality_matrix = np.empty((0, n))
        if (self.linear_cost.size != n
                or self.inequality_matrix.shape[1] != n
                or self.inequality_rhs.size != self.inequality_matrix.shape[0]
                or self.variable_lower_bounds.size != n):
            raise ValueError("inconsistent problem dimensions")
        if np.any(self.quadratic_diag < 0):
            raise ValueError("quadratic diagonal must be nonnegative")

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * np.sum(self.quadratic_diag * x * x)
                     + self.linear_cost @ x)


@dataclass
class QpSolution:
    variables: np.ndarray
    objective: float
    primal_residual: float
    status: str  # optimal | max-iterations | infeasible


def _stacked_constraints(problem: QpProblem):
    """All constraints as G x <= h, folding finite lower bounds in."""
    finite = np.isfinite(problem.variable_lower_bounds)
    n = problem.quadratic_diag.size
    bound_rows = -np.eye(n)[finite]
    bound_rhs = -problem.variable_lower_bounds[finite]
    G = np.vstack([problem.inequality_matrix, bound_rows])
    h = np.concatenate([problem.inequality_rhs, bound_rhs])
    return G, h


_EIG_FLOOR = 1e-9  # reduced curvature below this counts as flat


def _kkt_solve(q, c, G, h, idx):
    """Stationary point of the QP restricted to the working set idx.

    Solves in the null space of the active rows so that directions with
    (near-)zero curvature are handled explicitly: when the restricted
    problem is unbounded, a descent ray is returned instead of a point.
    Returns (x, nu, ray); exactly one of x/ray is not None.
    """
    n = q.size
    if idx.size == 0:
        flat = q <= _EIG_FLOOR
        if np.any(flat & (np.abs(c) > _EIG_FLOOR)):
            k = int(np.argmax(np.where(flat, np.abs(c), -np.inf)))
            ray = np.zeros(n)
            ray[k] = -np.sign(c[k])
            return None, np.empty(0), ray
        return -c / np.maximum(q, _EIG_FLOOR), np.empty(0), None

    Ga = G[idx]
    U, s, Vt = np.linalg.svd(Ga)
    rank = int(np.sum(s > max(s[0], 1.0) * 1e-12))
    # particular solution of Ga x = h_a plus a basis of its null space
    x_part = Vt[:rank].T @ ((U[:, :rank].T @ h[idx]) / s[:rank])
    Z = Vt[rank:].T
    if Z.shape[1]:
        grad_z = Z.T @ (q * x_part + c)
        Hz = Z.T @ (q[:, None] * Z)
        w, V = np.linalg.eigh(Hz)
        slopes = V.T @ grad_z
        unbounded = (w <= _EIG_FLOOR) & (np.abs(slopes) > 1e-9)
        if np.any(unbounded):
            k = int(np.argmax(np.where(unbounded, np.abs(slopes), -np.inf)))
            return None, np.empty(0), -np.sign(slopes[k]) * (Z @ V[:, k])
        step = -slopes / np.maximum(w, _EIG_FLOOR)
        x_opt = x_part + Z @ (V @ step)
    else:
        x_opt = x_part
    grad = q * x_opt + c
    nu = -U[:, :rank] @ ((Vt[:rank] @ grad) / s[:rank])
    return x_opt, nu, None


def _polish(problem: QpProblem, G, h, x, y, tolerance, working=None):
    """Primal active-set correction starting from the ADMM iterate.

    Classic working-set iteration: move toward the restricted stationary
    point but never past the first blocking constraint, add the blocker,
    and drop the lowest-indexed constraint with a negative multiplier once
    the restricted optimum is reached. Flat descent rays (zero-curvature
    directions of the LP-like slack block) are followed the same way.
    Returns (solution-or-None, working-set); the working set derives from
    the supplied iterate unless one is passed in explicitly.
    """
    q = np.maximum(problem.quadratic_diag, RIDGE)
    c = problem.linear_cost
    if working is None:
        working = (h - G @ x < 1e-4) | (y > 1e-6)
    base = np.array(x, dtype=float)

    def limited_step(direction, cap):
        """Largest step along `direction` before a non-working row blocks."""
        along = G @ direction
        blocking = ~working & (along > 1e-10)
        if not np.any(blocking):
            return cap, -1
        room = np.where(blocking, (h - G @ base) / np.where(blocking, along, 1.0), np.inf)
        hit = int(np.argmin(room))
        alpha = max(float(room[hit]), 0.0)
        if alpha >= cap:
            return cap, -1
        return alpha, hit

    for _ in range(200):
        idx = np.nonzero(working)[0]
        try:
            xp, nu, ray = _kkt_solve(q, c, G, h, idx)
        except np.linalg.LinAlgError:
            return None, None  # re-derive the set from a fresher iterate
        if ray is not None:
            alpha, hit = limited_step(ray, np.inf)
            if hit < 0:
                return None, None  # truly unbounded; leave it to ADMM
            base = base + alpha * ray
            working[hit] = True
            continue
        step = xp - base
        if np.max(np.abs(step)) > 1e-11:
            alpha, hit = limited_step(step, 1.0)
            base = base + alpha * step
            if hit >= 0:
                working[hit] = True
                continue
        else:
            base = xp
        negative = np.nonzero(nu < -1e-9)[0] if nu.size else []
        if len(negative):
            working[idx[negative[0]]] = False
            continue
        slack = h - G @ xp
        violated = np.nonzero(~working & (slack < -tolerance))[0]
        if violated.size:
            working[violated[0]] = True
            continue
        yp = np.zeros_like(h)
        if nu.size:
            yp[idx] = np.maximum(nu, 0.0)
        return (xp, yp), working
    return None, working


def solve(problem: QpProblem, tolerance: float = 1e-8,
          max_iterations: int = 20000) -> QpSolution:
    """ADMM iterations followed by an active-set polish step.

    Deterministic for fixed inputs. Status is `max-iterations` when the
    residual targets were not met within the cap (the best iterate is still
    returned).
    """
    q = np.maximum(problem.quadratic_diag, RIDGE)
    c = problem.linear_cost
    n = q.size
    G, h = _stacked_constraints(problem)
    m = G.shape[0]

    if m == 0:
        x = -c / q
        return QpSolution(x, problem.objective(x), 0.0, "optimal")

    rho = 1.0
    sigma = 1e-6
    Gt = np.ascontiguousarray(G.T)
    GtG = Gt @ G
    factor = cho_factor(np.diag(q + sigma) + rho * GtG, check_finite=False)
    x = np.zeros(n)
    z = np.minimum(G @ x, h)
    y = np.zeros(m)
    status = "max-iterations"

    def try_polish(x, y):
        polished, _ = _polish(problem, G, h, x, y, tolerance)
        if polished is None:
            return None
        xp, yp = polished
        viol = np.max(G @ xp - h, initial=0.0)
        stat = np.max(np.abs(q * xp + c + Gt @ yp))
        if viol <= tolerance and stat <= 10 * tolerance:
            return xp, yp
        return None

    it = 0
    block = 100
    while it < max_iterations:
        for _ in range(block):
            rhs = sigma * x - c + Gt @ (rho * z - y)
            x = cho_solve(factor, rhs, check_finite=False)
            Gx = G @ x
            z = np.minimum(Gx + y / rho, h)
            y = np.maximum(y + rho * (Gx - z), 0.0)
        it += block
        # polish on the tentative active set; accept once KKT-clean
        refined = try_polish(x, y)
        if refined is not None:
            x, y = refined
            status = "optimal"
            break
        primal = np.max(np.abs(Gx - z)) if m else 0.0
        dual = np.max(np.abs(q * x + c + Gt @ y))
        if primal <= tolerance and dual <= tolerance:
            status = "optimal"
            break
        if primal > 10 * dual:
            rho *= 5.0
            factor = cho_factor(np.diag(q + sigma) + rho * GtG,
                                check_finite=False)
        elif dual > 10 * primal:
            rho /= 5.0
            factor = cho_factor(np.diag(q + sigma) + rho * GtG,
                                check_finite=False)

    primal_residual = float(np.max(G @ x - h, initial=0.0))
    return QpSolution(np.asarray(x), problem.objective(x),
                      max(primal_residual, 0.0), status)
