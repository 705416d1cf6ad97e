"""Acquisition function and adaptive infeasibility/unsatisfaction weights."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .idw import IdwModel, exploration_z, exploration_z_blended
from .surrogate import PreferenceSurrogate


@dataclass
class AcquisitionConfig:
    delta_E: float = 1.0
    delta_G_default: float = 1.0
    delta_S_default: float = 0.5
    delta_G: float = None
    delta_S: float = None
    n_max: int = 50
    exploration_mode: str = "blended"  # blended | plain

    def __post_init__(self):
        if self.delta_G is None:
            self.delta_G = self.delta_G_default
        if self.delta_S is None:
            self.delta_S = self.delta_S_default
        for name in ("delta_E", "delta_G_default", "delta_S_default",
                     "delta_G", "delta_S"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.delta_G > self.delta_G_default or self.delta_S > self.delta_S_default:
            raise ValueError("current deltas cannot exceed their defaults")
        if self.exploration_mode not in ("blended", "plain"):
            raise ValueError("exploration_mode must be 'blended' or 'plain'")


def surrogate_range(surrogate: PreferenceSurrogate, unit_points) -> float:
    """Range of the surrogate over the samples, used as a normalizer.

    Falls back to 1 when the range is numerically zero (e.g. beta = 0 on the
    first iterations) to keep the acquisition finite.
    """
    values = np.atleast_1d(surrogate.predict(np.atleast_2d(unit_points)))
    span = float(np.max(values) - np.min(values))
    return span if span > 1e-9 else 1.0


def evaluate(x, surrogate: PreferenceSurrogate,
             g_model: Optional[IdwModel], s_model: Optional[IdwModel],
             unit_points, best_index: int,
             config: AcquisitionConfig):
    """Acquisition value(s) at unit-scaled point(s) x.

    Normalized exploitation minus weighted exploration, plus penalties for
    estimated infeasibility and unsatisfaction. Models may be None, in which
    case the corresponding penalty term is dropped.
    """
    single = np.asarray(x).ndim == 1
    xs = np.atleast_2d(np.asarray(x, dtype=float))
    span = surrogate_range(surrogate, unit_points)
    a = surrogate.predict(xs) / span
    if config.delta_E > 0:
        if config.exploration_mode == "blended":
            z = exploration_z_blended(xs, unit_points, best_index, config.n_max)
        else:
            z = exploration_z(xs, unit_points)
        a = a - config.delta_E * z
    if g_model is not None and config.delta_G > 0:
        a = a + config.delta_G * (1.0 - g_model.predict(xs))
    if s_model is not None and config.delta_S > 0:
        a = a + config.delta_S * (1.0 - s_model.predict(xs))
    return float(a[0]) if single else a


def _loo_sigma(model: IdwModel) -> float:
    preds = model.loo_predictions()
    err = preds - model.labels
    n = model.labels.size
    return min(1.0, float(np.sqrt(np.sum(err * err) / (n - 1))))


def adapt_deltas(g_model: Optional[IdwModel], s_model: Optional[IdwModel],
                 config: AcquisitionConfig) -> AcquisitionConfig:
    """Shrink delta_G/delta_S by the leave-one-out error of the IDW models.

    A standard deviation of the LOO errors near 1 means the probability
    surrogate is uninformative, so its penalty weight is driven to zero.
    With fewer than two samples the defaults are returned unchanged.
    """
    delta_g = config.delta_G_default
    delta_s = config.delta_S_default
    if g_model is not None and g_model.labels.size >= 2:
        delta_g = (1.0 - _loo_sigma(g_model)) * config.delta_G_default
    if s_model is not None and s_model.labels.size >= 2:
        delta_s = (1.0 - _loo_sigma(s_model)) * config.delta_S_default
    return replace(config, delta_G=delta_g, delta_S=delta_s)
