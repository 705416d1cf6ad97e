"""Particle swarm minimization over a box.

The objective receives a (P, n) batch of positions and returns (P,) values,
so vectorized acquisition evaluation is a single numpy call per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class PsoParams:
    swarm_size: Optional[int] = None  # None -> 20 * n_dims, at least 30
    iterations: int = 200
    inertia: float = 0.729
    cognitive: float = 1.494
    social: float = 1.494
    seed: int = 0

    def resolved_swarm(self, n_dims: int) -> int:
        if self.swarm_size is not None:
            if self.swarm_size < 2:
                raise ValueError("swarm_size must be >= 2")
            return self.swarm_size
        return max(30, 20 * n_dims)


def minimize(objective, lower, upper, params: PsoParams):
    """Best position/value found by a clamped constriction-coefficient swarm.

    Positions are clamped to the box every step with velocity zeroed on the
    clamped coordinate; deterministic for a fixed seed.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = lower.size
    p = params.resolved_swarm(n)
    rng = np.random.default_rng(params.seed)

    span = upper - lower
    x = lower + rng.uniform(size=(p, n)) * span
    v = rng.uniform(-1.0, 1.0, size=(p, n)) * span * 0.1

    f = np.asarray(objective(x), dtype=float)
    pbest_x = x.copy()
    pbest_f = f.copy()
    g = int(np.argmin(pbest_f))
    gbest_x = pbest_x[g].copy()
    gbest_f = float(pbest_f[g])

    for _ in range(params.iterations):
        r1 = rng.uniform(size=(p, n))
        r2 = rng.uniform(size=(p, n))
        v = (params.inertia * v
             + params.cognitive * r1 * (pbest_x - x)
             + params.social * r2 * (gbest_x - x))
        x = x + v
        low_hit = x < lower
        high_hit = x > upper
        x = np.clip(x, lower, upper)
        v[low_hit | high_hit] = 0.0

        f = np.asarray(objective(x), dtype=float)
        improved = f < pbest_f
        pbest_x[improved] = x[improved]
        pbest_f[improved] = f[improved]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest_f = float(pbest_f[g])
            gbest_x = pbest_x[g].copy()

    return gbest_x, gbest_f
