"""Search domain, point scaling, and the dataset accumulated over a run.

All surrogate computations elsewhere work on unit-scaled coordinates; the
dataset stores points in problem units and exposes a cached unit-scaled view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

DUPLICATE_TOL_SQ = 1e-12  # unit-space squared distance below which points collide
BOUNDS_TOL = 1e-9


class BoundsViolationError(ValueError):
    """A point lies outside the search box."""


class DimensionMismatchError(ValueError):
    """Vectors of incompatible length were combined."""


class DuplicateSampleError(ValueError):
    """A new sample coincides with an existing one."""


def squared_distance(x1, x2) -> float:
    """Squared Euclidean distance ||x1 - x2||^2."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {x1.shape} vs {x2.shape}")
    diff = x1 - x2
    return float(np.dot(diff, diff))


@dataclass(frozen=True)
class Domain:
    """Box search region with per-dimension bounds in problem units."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise DimensionMismatchError("lower/upper must be 1-D of equal length")
        if lower.size < 1:
            raise ValueError("domain must have at least one dimension")
        if not np.all(lower < upper):
            bad = int(np.argmin(upper - lower))
            raise ValueError(f"lower >= upper in dimension {bad}")

    @property
    def n_dims(self) -> int:
        return self.lower.size

    def contains(self, x, tol: float = BOUNDS_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def scale_to_unit(self, x) -> np.ndarray:
        """Map a point in the box to [0, 1]^n."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n_dims:
            raise DimensionMismatchError(
                f"point has {x.shape[-1]} coordinates, domain has {self.n_dims}")
        below = x < self.lower - BOUNDS_TOL
        above = x > self.upper + BOUNDS_TOL
        if np.any(below) or np.any(above):
            bad = int(np.argmax(below | above) if x.ndim == 1
                      else np.argmax(np.any(below | above, axis=0)))
            raise BoundsViolationError(f"coordinate {bad} outside bounds")
        return (x - self.lower) / (self.upper - self.lower)

    def unscale(self, u) -> np.ndarray:
        """Inverse of scale_to_unit."""
        u = np.asarray(u, dtype=float)
        return self.lower + u * (self.upper - self.lower)

    def to_json(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Domain":
        return cls(np.asarray(obj["lower"], float), np.asarray(obj["upper"], float))


@dataclass
class QueryResponse:
    """One decision-maker answer.

    preference compares (candidate, incumbent): -1 candidate better, 0 tie,
    +1 incumbent better. None only for the very first sample, which has no
    incumbent to compare against. satisfactory is None when the problem has
    no satisfaction assessment.
    """

    preference: Optional[int]
    feasible: int
    satisfactory: Optional[int] = None

    def __post_init__(self):
        if self.preference is not None and self.preference not in (-1, 0, 1):
            raise ValueError(f"preference must be -1, 0 or 1, got {self.preference}")
        if self.feasible not in (0, 1):
            raise ValueError("feasible must be 0 or 1")
        if self.satisfactory is not None and self.satisfactory not in (0, 1):
            raise ValueError("satisfactory must be 0, 1 or None")


@dataclass
class Dataset:
    """Samples, binary labels, preference triples and the incumbent index.

    Each appended sample (after the first) contributes exactly one preference
    triple comparing it against the incumbent, so M = N - 1 at all times.
    """

    domain: Domain
    points: list = field(default_factory=list)
    g_labels: list = field(default_factory=list)
    s_labels: list = field(default_factory=list)
    preferences: list = field(default_factory=list)  # (i, j, b) triples
    best_index: int = 0

    @property
    def n_samples(self) -> int:
        return len(self.points)

    def unit_points(self) -> np.ndarray:
        """All samples scaled to the unit box, shape (N, n)."""
        if not self.points:
            return np.empty((0, self.domain.n_dims))
        return self.domain.scale_to_unit(np.asarray(self.points, dtype=float))

    def incumbent(self) -> Optional[np.ndarray]:
        if not self.points:
            return None
        return np.asarray(self.points[self.best_index], dtype=float)

    def append_sample(self, x, response: QueryResponse) -> None:
        """Add a sample with its labels; record one preference vs the incumbent.

        The incumbent is replaced iff the decision-maker preferred the
        candidate (preference == -1).
        """
        x = np.asarray(x, dtype=float)
        xu = self.domain.scale_to_unit(x)
        existing = self.unit_points()
        if existing.size:
            d = np.sum((existing - xu) ** 2, axis=1)
            if np.min(d) <= DUPLICATE_TOL_SQ:
                raise DuplicateSampleError(
                    f"point coincides with sample {int(np.argmin(d))}")
        new_index = self.n_samples
        self.points.append(x)
        self.g_labels.append(int(response.feasible))
        self.s_labels.append(1 if response.satisfactory is None
                             else int(response.satisfactory))
        if new_index > 0:
            if response.preference is None:
                raise ValueError("preference required once an incumbent exists")
            self.preferences.append((new_index, self.best_index,
                                     int(response.preference)))
            if response.preference == -1:
                self.best_index = new_index

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "points": [np.asarray(p, float).tolist() for p in self.points],
            "g_labels": list(self.g_labels),
            "s_labels": list(self.s_labels),
            "preferences": [[int(i), int(j), int(b)] for i, j, b in self.preferences],
            "best_index": int(self.best_index),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Dataset":
        ds = cls(domain=Domain.from_json(obj["domain"]))
        ds.points = [np.asarray(p, float) for p in obj["points"]]
        ds.g_labels = [int(v) for v in obj["g_labels"]]
        ds.s_labels = [int(v) for v in obj["s_labels"]]
        ds.preferences = [(int(i), int(j), int(b)) for i, j, b in obj["preferences"]]
        ds.best_index = int(obj["best_index"])
        return ds

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, s: str) -> "Dataset":
        return cls.from_json(json.loads(s))
