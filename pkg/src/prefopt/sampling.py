"""Latin hypercube generation of the initial samples."""

from __future__ import annotations

import numpy as np


def latin_hypercube(n_points: int, n_dims: int, rng) -> np.ndarray:
    """Stratified samples in [0, 1]^{n_dims}, one per bin and dimension.

    Bin assignments are independently permuted per dimension; positions are
    uniform within each bin. `rng` is a numpy Generator or an integer seed.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if n_dims < 1:
        raise ValueError("n_dims must be >= 1")
    rng = np.random.default_rng(rng)
    u = rng.uniform(size=(n_points, n_dims))
    bins = np.empty((n_points, n_dims), dtype=int)
    for k in range(n_dims):
        bins[:, k] = rng.permutation(n_points)
    return (bins + u) / n_points
