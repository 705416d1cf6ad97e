"""Benchmark problems and the synthetic decision-maker.

The exact objective and constraint expressions are only ever used to answer
queries; the optimizer itself sees nothing but labels and preferences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import Domain, QueryResponse

PREF_TIE_TOL = 1e-9


@dataclass(frozen=True)
class BenchmarkProblem:
    name: str
    domain: Domain
    objective: Callable[[np.ndarray], float]
    feasibility_test: Callable[[np.ndarray], bool]
    satisfaction_test: Optional[Callable[[np.ndarray], bool]]
    reference_optimum: float

    @property
    def has_satisfaction(self) -> bool:
        return self.satisfaction_test is not None

    def evaluate(self, x) -> dict:
        x = np.asarray(x, dtype=float)
        if not self.domain.contains(x):
            raise ValueError(f"point {x} outside the {self.name} domain")
        out = {
            "f": float(self.objective(x)),
            "feasible": int(self.feasibility_test(x)),
        }
        if self.satisfaction_test is not None:
            out["satisfactory"] = int(self.satisfaction_test(x))
        return out


def _mishra_bird(x):
    a, b = x[0], x[1]
    return (np.sin(b) * np.exp((1 - np.cos(a)) ** 2)
            + np.cos(a) * np.exp((1 - np.sin(b)) ** 2)
            + (a - b) ** 2)


def _camel_six_humps(x):
    a, b = x[0], x[1]
    return ((4 - 2.1 * a ** 2 + a ** 4 / 3) * a ** 2
            + a * b + (4 * b ** 2 - 4) * b ** 2)


# five linear rows A @ [x, y] < b; strict inequalities, boundary infeasible
_CHC_A = np.array([[1.6295, 1.0],
                   [-1.0, 4.4553],
                   [-4.3023, -1.0],
                   [-5.6905, -12.1374],
                   [17.6198, 1.0]])
_CHC_B = np.array([3.0786, 2.7417, -1.4909, 1.0, 32.5198])

_CHSC_A = np.array([[1.6295, 1.0],
                    [0.5, 3.875],
                    [-4.3023, -4.0],
                    [-2.0, 1.0],
                    [0.5, -1.0]])
_CHSC_B = np.array([3.0786, 3.324, -1.4909, 0.5, 0.5])


def _mbc_feasible(x):
    return (x[0] + 9) ** 2 + (x[1] + 3) ** 2 < 9


def _chc_feasible(x):
    linear = bool(np.all(_CHC_A @ x < _CHC_B))
    disk = x[0] ** 2 + (x[1] + 0.1) ** 2 < 0.5
    return linear and disk


def _chsc_feasible(x):
    return x[0] ** 2 + (x[1] + 0.04) ** 2 < 0.8


def _chsc_satisfactory(x):
    return bool(np.all(_CHSC_A @ x < _CHSC_B))


_PROBLEMS = {
    "mbc": BenchmarkProblem(
        name="mbc",
        domain=Domain(np.array([-10.0, -6.5]), np.array([-2.0, 0.0])),
        objective=_mishra_bird,
        feasibility_test=_mbc_feasible,
        satisfaction_test=None,
        reference_optimum=-48.4,
    ),
    "chc": BenchmarkProblem(
        name="chc",
        domain=Domain(np.array([-2.0, -1.0]), np.array([2.0, 1.0])),
        objective=_camel_six_humps,
        feasibility_test=_chc_feasible,
        satisfaction_test=None,
        reference_optimum=-0.5844,
    ),
    "chsc": BenchmarkProblem(
        name="chsc",
        domain=Domain(np.array([-2.0, -1.0]), np.array([2.0, 1.0])),
        objective=_camel_six_humps,
        feasibility_test=_chsc_feasible,
        satisfaction_test=_chsc_satisfactory,
        reference_optimum=-0.9050,
    ),
}


def get_problem(name: str) -> BenchmarkProblem:
    try:
        return _PROBLEMS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(_PROBLEMS)}")


def problem_names() -> list:
    return sorted(_PROBLEMS)


def synthetic_response(problem: BenchmarkProblem, candidate,
                       incumbent=None) -> QueryResponse:
    """Answer a query the way an exact, consistent decision-maker would.

    Labels come straight from the constraint tests on the candidate. The
    preference compares lexicographically: feasibility first, then
    satisfaction (when defined), then the exact objective with a small tie
    tolerance.
    """
    cand = problem.evaluate(candidate)
    if incumbent is None:
        return QueryResponse(preference=None, feasible=cand["feasible"],
                             satisfactory=cand.get("satisfactory"))
    inc = problem.evaluate(incumbent)

    def key(e):
        return (e["feasible"], e.get("satisfactory", 0))

    ck, ik = key(cand), key(inc)
    if ck > ik:
        pref = -1
    elif ck < ik:
        pref = 1
    elif abs(cand["f"] - inc["f"]) <= PREF_TIE_TOL:
        pref = 0
    else:
        pref = -1 if cand["f"] < inc["f"] else 1
    return QueryResponse(preference=pref, feasible=cand["feasible"],
                         satisfactory=cand.get("satisfactory"))
