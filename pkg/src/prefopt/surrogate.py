"""RBF surrogate of the latent objective, fit to pairwise preferences.

The surrogate is a linear combination of radial basis functions centered at
the samples; its coefficients come from a convex QP whose constraints force
the surrogate's value differences to reproduce each expressed preference up
to a slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .idw import _pairwise_sq_dist
from .qp import QpProblem, QpSolution, solve


class RbfKind(str, Enum):
    INVERSE_QUADRATIC = "inverse-quadratic"
    GAUSSIAN = "gaussian"
    THIN_PLATE_SPLINE = "thin-plate-spline"


def rbf_value(kind: RbfKind, epsilon: float, D):
    """Evaluate the basis function at scaled squared distance(s) D."""
    t = epsilon * np.asarray(D, dtype=float)
    if kind == RbfKind.INVERSE_QUADRATIC:
        return 1.0 / (1.0 + t * t)
    if kind == RbfKind.GAUSSIAN:
        return np.exp(-(t * t))
    if kind == RbfKind.THIN_PLATE_SPLINE:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t > 0, t * t * np.log(np.maximum(t, 1e-300)), 0.0)
        return out
    raise ValueError(f"unknown RBF kind {kind!r}")


@dataclass
class FitConfig:
    """Tolerance, per-preference weights and regularization of the fit QP."""

    sigma: float = 0.02
    c_weight: float = 1.0
    lam: float = 1e-6

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.c_weight <= 0:
            raise ValueError("c_weight must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")


@dataclass
class PreferenceSurrogate:
    kind: RbfKind
    epsilon: float
    centers: np.ndarray  # (N, n), unit-scaled
    beta: np.ndarray     # (N,)

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        self.beta = np.asarray(self.beta, dtype=float).ravel()
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.beta.size != self.centers.shape[0]:
            raise ValueError("beta length must equal center count")

    def predict(self, x):
        """sum_k beta_k * phi(eps * d(x, x_k)), d the squared distance."""
        single = np.asarray(x).ndim == 1
        D = _pairwise_sq_dist(x, self.centers)
        vals = rbf_value(self.kind, self.epsilon, D) @ self.beta
        return float(vals[0]) if single else vals


def kernel_matrix(kind: RbfKind, epsilon: float, points: np.ndarray) -> np.ndarray:
    D = _pairwise_sq_dist(points, points)
    return rbf_value(kind, epsilon, D)


def assemble_qp(unit_points: np.ndarray,
                preferences: Sequence[tuple],
                kind: RbfKind, epsilon: float,
                config: FitConfig) -> QpProblem:
    """Build the preference-fit QP over variables [beta (N), slacks (M)].

    For each preference (i, j, b) with kernel rows Phi_i, Phi_j:
      b = -1:  (Phi_i - Phi_j) beta <= -sigma + slack
      b = +1:  (Phi_i - Phi_j) beta >=  sigma - slack
      b =  0:  |(Phi_i - Phi_j) beta| <= sigma + slack (split in two rows)
    Slacks are bounded below by zero; beta is free.
    """
    unit_points = np.atleast_2d(np.asarray(unit_points, dtype=float))
    n = unit_points.shape[0]
    m = len(preferences)
    phi = kernel_matrix(kind, epsilon, unit_points)

    rows, rhs = [], []
    for h, (i, j, b) in enumerate(preferences):
        diff = phi[i] - phi[j]
        slack = np.zeros(m)
        slack[h] = -1.0
        if b == -1:
            rows.append(np.concatenate([diff, slack]))
            rhs.append(-config.sigma)
        elif b == 1:
            rows.append(np.concatenate([-diff, slack]))
            rhs.append(-config.sigma)
        elif b == 0:
            rows.append(np.concatenate([diff, slack]))
            rhs.append(config.sigma)
            rows.append(np.concatenate([-diff, slack]))
            rhs.append(config.sigma)
        else:
            raise ValueError(f"preference value must be -1, 0 or 1, got {b}")

    quad = np.concatenate([np.full(n, config.lam), np.zeros(m)])
    linear = np.concatenate([np.zeros(n), np.full(m, config.c_weight)])
    lower = np.concatenate([np.full(n, -np.inf), np.zeros(m)])
    A = np.asarray(rows) if rows else np.empty((0, n + m))
    return QpProblem(quad, linear, A, np.asarray(rhs), lower)


def fit(unit_points: np.ndarray,
        preferences: Sequence[tuple],
        kind: RbfKind, epsilon: float,
        config: FitConfig) -> PreferenceSurrogate:
    """Fit the surrogate coefficients; with no preferences beta is zero."""
    unit_points = np.atleast_2d(np.asarray(unit_points, dtype=float))
    n = unit_points.shape[0]
    if len(preferences) == 0:
        return PreferenceSurrogate(kind, epsilon, unit_points, np.zeros(n))
    problem = assemble_qp(unit_points, preferences, kind, epsilon, config)
    solution = solve(problem)
    if solution.status == "infeasible":
        raise RuntimeError(f"preference QP reported infeasible: {solution}")
    return PreferenceSurrogate(kind, epsilon, unit_points,
                               solution.variables[:n])


def _score_holdout(surrogate: PreferenceSurrogate, unit_points, holdout,
                   sigma: float) -> int:
    """Count held-out preferences whose sign the surrogate reconstructs."""
    values = surrogate.predict(unit_points)
    correct = 0
    for i, j, b in holdout:
        delta = values[i] - values[j]
        if abs(delta) <= sigma:
            predicted = 0
        else:
            predicted = -1 if delta < 0 else 1
        if predicted == b:
            correct += 1
    return correct


def calibrate_epsilon(unit_points: np.ndarray,
                      preferences: Sequence[tuple],
                      kind: RbfKind,
                      grid: Sequence[float],
                      k_folds: int,
                      config: FitConfig,
                      rng=None) -> float:
    """Pick the grid value of epsilon with the best K-fold held-out score.

    Preferences are shuffled (seeded) and split into k_folds slices; each
    candidate is scored by how many held-out preferences the surrogate fit on
    the remaining slices reproduces. Ties break toward the smaller epsilon.
    """
    grid = sorted(float(e) for e in grid)
    if not grid:
        raise ValueError("epsilon grid must be nonempty")
    preferences = list(preferences)
    m = len(preferences)
    if m < k_folds:
        raise ValueError(f"need at least {k_folds} preferences, have {m}")
    order = np.random.default_rng(rng).permutation(m)
    folds = np.array_split(order, k_folds)

    best_eps, best_score = grid[0], -1
    for eps in grid:
        score = 0
        for fold in folds:
            held = set(int(t) for t in fold)
            train = [preferences[h] for h in range(m) if h not in held]
            test = [preferences[h] for h in sorted(held)]
            surrogate = fit(unit_points, train, kind, eps, config)
            score += _score_holdout(surrogate, unit_points, test, config.sigma)
        if score > best_score:
            best_eps, best_score = eps, score
    return best_eps


def default_epsilon_grid(current: float) -> list:
    """Log-spaced multipliers around the incumbent shape parameter."""
    return [m * current for m in (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)]
