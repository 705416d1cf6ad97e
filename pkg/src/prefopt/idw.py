"""Inverse-distance-weighting probability surrogates and exploration terms.

All functions accept a single point (n,) or a batch (P, n) and are pure, so
they can be evaluated concurrently across swarm particles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# floor on squared distances: the IDW weight exp(-D)/D blows up at D -> 0,
# so near-duplicate numerical noise is clamped rather than propagated
DIST_FLOOR = 1e-12


class IdwSingularityError(ValueError):
    """idw_weight was evaluated at zero distance."""


def _pairwise_sq_dist(x: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, shape (P, N)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    diff = x[:, None, :] - anchors[None, :, :]
    return np.sum(diff * diff, axis=2)


def idw_weight(x, anchor) -> float:
    """IDW weight exp(-D)/D with D the squared distance to the anchor."""
    d = _pairwise_sq_dist(x, anchor)[0, 0]
    if d <= DIST_FLOOR:
        raise IdwSingularityError("idw_weight undefined at zero distance")
    return float(np.exp(-d) / d)


def idw_coefficients(x, anchors) -> np.ndarray:
    """Normalized IDW coefficients, one probability vector per query point.

    At an anchor the vector is the corresponding unit vector; elsewhere the
    weights exp(-D)/D are normalized to sum to 1.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    if anchors.shape[0] == 0:
        raise ValueError("anchor set must be nonempty")
    single = np.asarray(x).ndim == 1
    d = _pairwise_sq_dist(x, anchors)
    hits = d <= DIST_FLOOR
    d = np.maximum(d, DIST_FLOOR)
    w = np.exp(-d) / d
    nu = w / np.sum(w, axis=1, keepdims=True)
    rows = np.any(hits, axis=1)
    if np.any(rows):
        nu[rows] = 0.0
        for r in np.nonzero(rows)[0]:
            nu[r, int(np.argmax(hits[r]))] = 1.0
    return nu[0] if single else nu


@dataclass
class IdwModel:
    """Binary labels attached to anchor points, read out as a probability."""

    anchors: np.ndarray  # (N, n), unit-scaled
    labels: np.ndarray   # (N,), values in {0, 1}

    def __post_init__(self):
        self.anchors = np.atleast_2d(np.asarray(self.anchors, dtype=float))
        self.labels = np.asarray(self.labels, dtype=float).ravel()
        if self.labels.size != self.anchors.shape[0]:
            raise ValueError("labels length must equal anchor count")

    def predict(self, x):
        """Label-weighted IDW sum; in [0, 1], interpolates labels at anchors."""
        nu = idw_coefficients(x, self.anchors)
        return np.clip(nu @ self.labels, 0.0, 1.0)

    def loo_predictions(self) -> np.ndarray:
        """Leave-one-out prediction at each anchor.

        IDW has no trained parameters, so dropping sample i just renormalizes
        the remaining coefficients.
        """
        n = self.anchors.shape[0]
        if n < 2:
            return self.labels.copy()
        d = np.maximum(_pairwise_sq_dist(self.anchors, self.anchors), DIST_FLOOR)
        w = np.exp(-d) / d
        np.fill_diagonal(w, 0.0)
        return (w @ self.labels) / np.sum(w, axis=1)


def _r_sum(x, anchors) -> np.ndarray:
    """Sum of inverse squared distances, with a flag for anchor coincidence."""
    d = _pairwise_sq_dist(x, anchors)
    hit = np.any(d <= DIST_FLOOR, axis=1)
    d = np.maximum(d, DIST_FLOOR)
    return np.sum(1.0 / d, axis=1), hit


def exploration_z(x, anchors):
    """Pure distance-based exploration: arctan(1 / sum_i 1/d^2(x, x_i)).

    Zero exactly at the anchors, approaches pi/2 far from all of them.
    """
    single = np.asarray(x).ndim == 1
    s, hit = _r_sum(x, anchors)
    z = np.arctan(1.0 / s)
    z[hit] = 0.0
    return float(z[0]) if single else z


def exploration_z_blended(x, anchors, best_index: int, n_max: int):
    """Exploration blending distance-to-incumbent and plain IDW distance.

    Early on (N << n_max) the first term dominates, pushing proposals away
    relative to how far existing samples sit from the incumbent; the weight
    shifts to the plain term as the budget is consumed.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    n = anchors.shape[0]
    if n > n_max:
        raise ValueError("anchor count exceeds n_max")
    single = np.asarray(x).ndim == 1
    s, hit = _r_sum(x, anchors)
    # sum of r_i at the incumbent, excluding its own (singular) self-term
    x_best = anchors[best_index]
    if n > 1:
        others = np.delete(anchors, best_index, axis=0)
        d_best = np.maximum(_pairwise_sq_dist(x_best, others)[0], DIST_FLOOR)
        s_best = float(np.sum(1.0 / d_best))
    else:
        s_best = 0.0
    frac = n / n_max
    z = (1.0 - frac) * np.arctan(s_best / s) + frac * np.arctan(1.0 / s)
    z[hit] = 0.0
    return float(z[0]) if single else z
