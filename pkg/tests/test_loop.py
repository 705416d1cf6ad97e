import numpy as np
import pytest

from prefopt.acquisition import AcquisitionConfig
from prefopt.loop import (OptimizerRun, RunConfig, default_n_init,
                          default_recalibration_steps, run_headless,
                          write_history_csv)
from prefopt.model import DUPLICATE_TOL_SQ, Domain
from prefopt.problems import get_problem, synthetic_response
from prefopt.pso import PsoParams
from prefopt.surrogate import FitConfig


def _small_config(seed=0, n_max=10, **kwargs):
    domain = kwargs.pop("domain", Domain(np.array([-1.0, -1.0]),
                                         np.array([1.0, 1.0])))
    return RunConfig(
        domain=domain, n_max=n_max, n_init=4,
        acquisition=AcquisitionConfig(n_max=n_max),
        fit=FitConfig(sigma=1.0 / n_max),
        epsilon_recalibration_steps=[4, 7],
        seed=seed,
        pso=PsoParams(swarm_size=20, iterations=40),
        **kwargs)


def _sphere_oracle(candidate, incumbent):
    # latent objective ||x||^2, feasible iff x0 < 0.5
    from prefopt.model import QueryResponse
    feas = int(candidate[0] < 0.5)
    if incumbent is None:
        return QueryResponse(None, feas)
    fc, fi = np.sum(candidate ** 2), np.sum(incumbent ** 2)
    feas_i = int(incumbent[0] < 0.5)
    if feas != feas_i:
        pref = -1 if feas > feas_i else 1
    elif abs(fc - fi) <= 1e-12:
        pref = 0
    else:
        pref = -1 if fc < fi else 1
    return QueryResponse(pref, feas)


def test_defaults():
    assert default_n_init(50) == 13
    assert default_n_init(100) == 25
    assert default_recalibration_steps(50, 13) == [13, 22, 32, 41]
    assert default_recalibration_steps(100, 25) == [25, 44, 63, 81]


def test_config_validation():
    with pytest.raises(ValueError):
        _small_config(n_max=3)  # n_init=4 >= n_max
    with pytest.raises(ValueError):
        RunConfig(domain=Domain(np.array([0.0]), np.array([1.0])),
                  n_max=10, n_init=4, epsilon_recalibration_steps=[2])


def test_initial_phase_counts():
    run = OptimizerRun(_small_config())
    q = run.next_query()
    assert q["iteration"] == 0
    assert q["incumbent"] is None
    assert run.config.domain.contains(q["candidate"])


def test_full_run_counts_and_invariants():
    config = _small_config(seed=1)
    result = run_headless(config, _sphere_oracle)
    ds = result.dataset
    assert ds.n_samples == config.n_max
    assert len(ds.preferences) == config.n_max - 1
    # proposals pairwise distinct in unit space
    unit = ds.unit_points()
    for i in range(len(unit)):
        for j in range(i):
            assert np.sum((unit[i] - unit[j]) ** 2) > DUPLICATE_TOL_SQ
    # all in box
    for p in ds.points:
        assert config.domain.contains(p)


def test_incumbent_never_loses_replay():
    config = _small_config(seed=2)
    result = run_headless(config, _sphere_oracle)
    ds = result.dataset
    best = 0
    for i, j, b in ds.preferences:
        assert j == best  # comparisons are always against the incumbent
        if b == -1:
            best = i
    assert best == ds.best_index


def test_recalibration_exactly_at_steps():
    config = _small_config(seed=3)
    result = run_headless(config, _sphere_oracle)
    recal = [r["iteration"] for r in result.history if r["recalibrated"]]
    assert recal == [4, 7]


def test_determinism():
    a = run_headless(_small_config(seed=5), _sphere_oracle)
    b = run_headless(_small_config(seed=5), _sphere_oracle)
    assert a.dataset.dumps() == b.dataset.dumps()
    assert np.array_equal(a.best_point, b.best_point)


def test_submit_without_query_fails():
    run = OptimizerRun(_small_config())
    from prefopt.model import QueryResponse
    with pytest.raises(RuntimeError):
        run.submit(QueryResponse(None, 1))


def test_finished_run_returns_none():
    config = _small_config(seed=6)
    run = OptimizerRun(config)
    while not run.finished:
        q = run.next_query()
        run.submit(_sphere_oracle(q["candidate"], q["incumbent"]))
    assert run.next_query() is None


def test_resume_from_snapshot_matches():
    """A run resumed from its dataset snapshot proposes identical points."""
    config = _small_config(seed=7)
    ref = OptimizerRun(config)
    for _ in range(6):
        q = ref.next_query()
        ref.submit(_sphere_oracle(q["candidate"], q["incumbent"]))
    from prefopt.model import Dataset
    resumed = OptimizerRun(config,
                           dataset=Dataset.loads(ref.dataset.dumps()),
                           epsilon=ref.epsilon,
                           recalibration_done=set(ref.recalibration_done))
    q_ref = ref.next_query()
    q_res = resumed.next_query()
    assert np.array_equal(q_ref["candidate"], q_res["candidate"])


def test_mbc_config_sizes():
    from prefopt.bench import default_config
    cfg = default_config("mbc")
    assert cfg.n_init == 13
    run = OptimizerRun(cfg)
    assert len(run._initial_points) == 13
    assert default_config("chc").n_init == 25


def test_ablation_mode_never_builds_models():
    config = _small_config(seed=8)
    config.acquisition = AcquisitionConfig(
        delta_E=1.0, delta_G_default=0.0, delta_S_default=0.0,
        n_max=config.n_max, exploration_mode="plain")
    run = OptimizerRun(config)
    for _ in range(5):
        q = run.next_query()
        run.submit(_sphere_oracle(q["candidate"], q["incumbent"]))
    _, g_model, s_model = run._build_models()
    assert g_model is None and s_model is None


def test_history_csv(tmp_path):
    config = _small_config(seed=9)
    result = run_headless(config, _sphere_oracle)
    path = tmp_path / "history.csv"
    write_history_csv(result, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == config.n_max + 1
    assert lines[0].startswith("iteration,x0,x1,preference")
