import math

import numpy as np
import pytest

from prefopt.acquisition import (AcquisitionConfig, adapt_deltas, evaluate,
                                 surrogate_range)
from prefopt.idw import IdwModel, exploration_z_blended
from prefopt.surrogate import PreferenceSurrogate, RbfKind


def _surrogate(centers, beta, eps=1.0):
    return PreferenceSurrogate(RbfKind.INVERSE_QUADRATIC, eps,
                               np.asarray(centers), np.asarray(beta))


def test_surrogate_range_fallback():
    pts = np.array([[0.1, 0.1], [0.9, 0.9]])
    assert surrogate_range(_surrogate(pts, [0.0, 0.0]), pts) == 1.0
    assert surrogate_range(_surrogate(pts[:1], [3.0]), pts[:1]) == 1.0


def test_surrogate_range_span():
    pts = np.array([[0.0], [0.5], [1.0]])
    s = _surrogate(pts, [1.0, -0.5, 2.0])
    vals = s.predict(pts)
    assert surrogate_range(s, pts) == pytest.approx(vals.max() - vals.min())


def test_evaluate_pure_exploitation():
    pts = np.array([[0.2, 0.2], [0.8, 0.8]])
    s = _surrogate(pts, [1.0, -1.0])
    cfg = AcquisitionConfig(delta_E=0.0, delta_G_default=0.0,
                            delta_S_default=0.0, n_max=10)
    x = np.array([0.5, 0.4])
    expected = s.predict(x) / surrogate_range(s, pts)
    assert evaluate(x, s, None, None, pts, 0, cfg) == pytest.approx(
        expected, abs=1e-12)


def test_evaluate_full_straightline():
    rng = np.random.default_rng(0)
    pts = rng.uniform(size=(5, 2))
    s = _surrogate(pts, rng.normal(size=5))
    g = IdwModel(pts, rng.integers(0, 2, size=5))
    sm = IdwModel(pts, rng.integers(0, 2, size=5))
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=1.0,
                            delta_S_default=0.5, n_max=50)
    x = rng.uniform(size=2)
    expected = (s.predict(x) / surrogate_range(s, pts)
                - cfg.delta_E * exploration_z_blended(x, pts, 2, 50)
                + cfg.delta_G * (1 - g.predict(x))
                + cfg.delta_S * (1 - sm.predict(x)))
    got = evaluate(x, s, g, sm, pts, 2, cfg)
    assert got == pytest.approx(expected, abs=1e-12)


def test_evaluate_at_feasible_sample():
    pts = np.array([[0.2, 0.2], [0.8, 0.8]])
    s = _surrogate(pts, [1.0, -1.0])
    g = IdwModel(pts, [1, 0])
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=1.0,
                            delta_S_default=0.0, n_max=10)
    # at a feasible sample both the exploration and G-penalty terms vanish
    expected = s.predict(pts[0]) / surrogate_range(s, pts)
    assert evaluate(pts[0], s, g, None, pts, 0, cfg) == pytest.approx(
        expected, abs=1e-12)


def test_penalty_bounds_and_monotonicity():
    rng = np.random.default_rng(1)
    pts = rng.uniform(size=(6, 2))
    s = _surrogate(pts, rng.normal(size=6))
    g = IdwModel(pts, rng.integers(0, 2, size=6))
    xs = rng.uniform(size=(100, 2))
    lo = AcquisitionConfig(delta_E=0.0, delta_G_default=1.0,
                           delta_S_default=0.0, delta_G=0.5, n_max=10)
    hi = AcquisitionConfig(delta_E=0.0, delta_G_default=1.0,
                           delta_S_default=0.0, delta_G=1.0, n_max=10)
    a_lo = evaluate(xs, s, g, None, pts, 0, lo)
    a_hi = evaluate(xs, s, g, None, pts, 0, hi)
    assert np.all(a_hi >= a_lo - 1e-12)
    ghat = g.predict(xs)
    assert np.allclose((a_hi - a_lo)[ghat == 1], 0.0, atol=1e-12)


def test_adapt_perfect_loo_recovers_defaults():
    # clustered identical-label groups: LOO predictions match labels closely
    pts = np.vstack([np.full((3, 2), 0.1) + np.eye(3, 2) * 1e-3,
                     np.full((3, 2), 0.9) + np.eye(3, 2) * 1e-3])
    labels = np.array([1, 1, 1, 0, 0, 0])
    g = IdwModel(pts, labels)
    assert np.allclose(g.loo_predictions(), labels, atol=1e-6)
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=1.0,
                            delta_S_default=0.0, n_max=10)
    out = adapt_deltas(g, None, cfg)
    assert out.delta_G == pytest.approx(1.0, abs=1e-5)


def test_adapt_worst_case_clamps_to_zero():
    # two samples, opposite labels: LOO predicts the other label exactly,
    # so sigma = min(1, sqrt(2/1)) = 1 and delta collapses to 0
    pts = np.array([[0.2, 0.2], [0.8, 0.8]])
    g = IdwModel(pts, [1, 0])
    assert np.allclose(g.loo_predictions(), [0, 1])
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=1.0,
                            delta_S_default=0.0, n_max=10)
    out = adapt_deltas(g, None, cfg)
    assert out.delta_G == 0.0


def test_adapt_single_sample_returns_defaults():
    g = IdwModel(np.array([[0.5, 0.5]]), [1])
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=0.7,
                            delta_S_default=0.3, n_max=10)
    out = adapt_deltas(g, None, cfg)
    assert out.delta_G == 0.7
    assert out.delta_S == 0.3


def test_adapt_output_always_in_range():
    rng = np.random.default_rng(2)
    cfg = AcquisitionConfig(delta_E=1.0, delta_G_default=2.0,
                            delta_S_default=0.5, n_max=10)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        g = IdwModel(rng.uniform(size=(n, 2)), rng.integers(0, 2, size=n))
        s = IdwModel(rng.uniform(size=(n, 2)), rng.integers(0, 2, size=n))
        out = adapt_deltas(g, s, cfg)
        assert 0.0 <= out.delta_G <= cfg.delta_G_default
        assert 0.0 <= out.delta_S <= cfg.delta_S_default


def test_config_validation():
    with pytest.raises(ValueError):
        AcquisitionConfig(delta_E=-1.0)
    with pytest.raises(ValueError):
        AcquisitionConfig(delta_G_default=1.0, delta_G=2.0)
    with pytest.raises(ValueError):
        AcquisitionConfig(exploration_mode="bogus")
