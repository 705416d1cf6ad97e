"""Main driver: initial sampling, active-learning iterations, termination.

The run is a pausable state machine (next_query / submit) so the same engine
serves both the synthetic-oracle harness and the interactive HTTP service.
All randomness derives from (seed, purpose, iteration), which makes a run
resumable from a dataset snapshot without replaying it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .acquisition import AcquisitionConfig, adapt_deltas, evaluate
from .idw import IdwModel
from .model import DUPLICATE_TOL_SQ, Dataset, Domain, QueryResponse
from .pso import PsoParams, minimize
from .sampling import latin_hypercube
from .surrogate import (FitConfig, RbfKind, calibrate_epsilon,
                        default_epsilon_grid, fit)

# stream tags keeping the per-purpose RNGs independent
_TAG_LHS, _TAG_PSO, _TAG_CALIB, _TAG_PERTURB = 0, 1, 2, 3


def _rng(seed: int, tag: int, n: int = 0):
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag, n]))


def default_n_init(n_max: int) -> int:
    """One quarter of the evaluation budget, rounded up."""
    return int(math.ceil(n_max / 4))


def default_recalibration_steps(n_max: int, n_init: int) -> list:
    span = n_max - n_init
    return [int(math.floor(n_init + f * span + 0.5))
            for f in (0.0, 0.25, 0.5, 0.75)]


@dataclass
class RunConfig:
    domain: Domain
    n_max: int = 50
    n_init: Optional[int] = None
    acquisition: AcquisitionConfig = None
    fit: FitConfig = None
    rbf_kind: RbfKind = RbfKind.INVERSE_QUADRATIC
    epsilon_initial: float = 1.0
    epsilon_recalibration_steps: Optional[list] = None
    k_folds: int = 3
    has_satisfaction_oracle: bool = False
    seed: int = 0
    pso: PsoParams = field(default_factory=PsoParams)

    def __post_init__(self):
        if self.n_init is None:
            self.n_init = default_n_init(self.n_max)
        if self.acquisition is None:
            self.acquisition = AcquisitionConfig(n_max=self.n_max)
        if self.fit is None:
            self.fit = FitConfig(sigma=1.0 / self.n_max)
        if self.epsilon_recalibration_steps is None:
            self.epsilon_recalibration_steps = default_recalibration_steps(
                self.n_max, self.n_init)
        if not (2 <= self.n_init < self.n_max):
            raise ValueError("need 2 <= n_init < n_max")
        for step in self.epsilon_recalibration_steps:
            if not (self.n_init <= step <= self.n_max):
                raise ValueError("recalibration steps must lie in [n_init, n_max]")
        if self.epsilon_initial <= 0:
            raise ValueError("epsilon_initial must be positive")


@dataclass
class RunResult:
    best_point: np.ndarray
    dataset: Dataset
    history: list


class OptimizerRun:
    """One optimization run owning its dataset and surrogate state."""

    def __init__(self, config: RunConfig, dataset: Optional[Dataset] = None,
                 epsilon: Optional[float] = None,
                 recalibration_done: Optional[set] = None,
                 history: Optional[list] = None):
        self.config = config
        self.dataset = dataset if dataset is not None else Dataset(config.domain)
        self.epsilon = config.epsilon_initial if epsilon is None else epsilon
        self.recalibration_done = set(recalibration_done or ())
        self.history = list(history or ())
        self._pending = None
        unit = latin_hypercube(config.n_init, config.domain.n_dims,
                               _rng(config.seed, _TAG_LHS))
        self._initial_points = config.domain.unscale(unit)
        self._acq = replace(config.acquisition)

    # -- state ---------------------------------------------------------------

    @property
    def finished(self) -> bool:
        return self.dataset.n_samples >= self.config.n_max

    @property
    def pending_query(self):
        return self._pending

    def restore_pending(self, candidate, iteration: int,
                        delta_g: float = None, delta_s: float = None):
        """Reinstate a persisted pending query after a restart."""
        self._pending = {
            "candidate": np.asarray(candidate, dtype=float),
            "incumbent": self.dataset.incumbent(),
            "iteration": int(iteration),
        }
        if delta_g is not None:
            self._acq = replace(self._acq, delta_G=delta_g)
        if delta_s is not None:
            self._acq = replace(self._acq, delta_S=delta_s)

    # -- query generation ----------------------------------------------------

    def next_query(self):
        """The next point to assess, or None when the budget is spent."""
        if self._pending is not None:
            return self._pending
        if self.finished:
            return None
        n = self.dataset.n_samples
        if n < self.config.n_init:
            candidate = self._initial_points[n]
        else:
            candidate = self._propose_active(n)
        self._pending = {
            "candidate": np.asarray(candidate, dtype=float),
            "incumbent": self.dataset.incumbent(),
            "iteration": n,
        }
        return self._pending

    def _build_models(self):
        cfg = self.config
        unit = self.dataset.unit_points()
        g_model = None
        s_model = None
        if cfg.acquisition.delta_G_default > 0:
            g_model = IdwModel(unit, np.asarray(self.dataset.g_labels))
        if cfg.has_satisfaction_oracle and cfg.acquisition.delta_S_default > 0:
            s_model = IdwModel(unit, np.asarray(self.dataset.s_labels))
        return unit, g_model, s_model

    def _propose_active(self, n: int) -> np.ndarray:
        cfg = self.config
        unit, g_model, s_model = self._build_models()
        self._acq = adapt_deltas(g_model, s_model, self._acq)

        if (n in cfg.epsilon_recalibration_steps
                and n not in self.recalibration_done
                and len(self.dataset.preferences) >= cfg.k_folds):
            self.epsilon = calibrate_epsilon(
                unit, self.dataset.preferences, cfg.rbf_kind,
                default_epsilon_grid(self.epsilon), cfg.k_folds, cfg.fit,
                rng=_rng(cfg.seed, _TAG_CALIB, n))
            self.recalibration_done.add(n)

        surrogate = fit(unit, self.dataset.preferences, cfg.rbf_kind,
                        self.epsilon, cfg.fit)
        best = self.dataset.best_index

        def objective(xs):
            return evaluate(xs, surrogate, g_model, s_model, unit, best,
                            self._acq)

        params = replace(cfg.pso, seed=_rng(cfg.seed, _TAG_PSO, n))
        x_unit, _ = minimize(objective, np.zeros(cfg.domain.n_dims),
                             np.ones(cfg.domain.n_dims), params)
        x_unit = self._dedupe(x_unit, unit, n)
        return cfg.domain.unscale(x_unit)

    def _dedupe(self, x_unit, unit_points, n):
        """Perturb a proposal that collides with an existing sample."""
        rng = _rng(self.config.seed, _TAG_PERTURB, n)
        for _ in range(100):
            d = np.sum((unit_points - x_unit) ** 2, axis=1)
            if d.size == 0 or np.min(d) > DUPLICATE_TOL_SQ:
                return x_unit
            x_unit = np.clip(
                x_unit + rng.uniform(-1e-3, 1e-3, size=x_unit.size), 0.0, 1.0)
        raise RuntimeError("could not generate a distinct proposal")

    # -- responses -----------------------------------------------------------

    def submit(self, response: QueryResponse) -> None:
        if self._pending is None:
            raise RuntimeError("no pending query; call next_query first")
        candidate = self._pending["candidate"]
        self.dataset.append_sample(candidate, response)
        self.history.append({
            "iteration": self._pending["iteration"],
            "point": candidate.tolist(),
            "preference": response.preference,
            "feasible": response.feasible,
            "satisfactory": response.satisfactory,
            "delta_G": self._acq.delta_G,
            "delta_S": self._acq.delta_S,
            "epsilon": self.epsilon,
            "incumbent_index": self.dataset.best_index,
            "recalibrated": self._pending["iteration"] in self.recalibration_done,
        })
        self._pending = None

    def result(self) -> RunResult:
        return RunResult(best_point=self.dataset.incumbent(),
                         dataset=self.dataset, history=self.history)


def run_headless(config: RunConfig,
                 oracle: Callable[[np.ndarray, Optional[np.ndarray]], QueryResponse]
                 ) -> RunResult:
    """Drive a full run with a programmatic decision-maker."""
    run = OptimizerRun(config)
    while not run.finished:
        query = run.next_query()
        response = oracle(query["candidate"], query["incumbent"])
        run.submit(response)
    return run.result()


HISTORY_FIELDS = ("iteration", "preference", "feasible", "satisfactory",
                  "delta_G", "delta_S", "epsilon", "incumbent_index",
                  "recalibrated")


def write_history_csv(result: RunResult, path) -> None:
    n_dims = result.dataset.domain.n_dims
    coord_cols = [f"x{k}" for k in range(n_dims)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", *coord_cols, "preference", "feasible",
                         "satisfactory", "delta_G", "delta_S", "epsilon",
                         "incumbent_index"])
        for rec in result.history:
            writer.writerow([rec["iteration"], *rec["point"],
                             rec["preference"], rec["feasible"],
                             rec["satisfactory"], rec["delta_G"],
                             rec["delta_S"], rec["epsilon"],
                             rec["incumbent_index"]])
