import numpy as np
import pytest

from prefopt.problems import get_problem, problem_names, synthetic_response


def test_problem_names():
    assert problem_names() == ["chc", "chsc", "mbc"]
    with pytest.raises(KeyError):
        get_problem("nope")


def test_camel_objective_origin():
    for name in ("chc", "chsc"):
        assert get_problem(name).evaluate([0.0, 0.0])["f"] == 0.0


def test_mbc_circle_center_feasible():
    mbc = get_problem("mbc")
    assert mbc.evaluate([-9.0, -3.0])["feasible"] == 1


def test_mbc_boundary_infeasible():
    # exactly on the circle: strict inequality makes it infeasible
    mbc = get_problem("mbc")
    assert mbc.evaluate([-6.0, -3.0])["feasible"] == 0


def test_chc_linear_row_violation():
    # (0, -0.1): inside the disk but row 3 of the linear system fails
    chc = get_problem("chc")
    assert chc.evaluate([0.0, -0.1])["feasible"] == 0


def test_chsc_labels():
    chsc = get_problem("chsc")
    out = chsc.evaluate([0.0, 0.0])
    assert set(out) == {"f", "feasible", "satisfactory"}
    assert out["feasible"] == 1  # 0 + 0.04^2 < 0.8


def test_out_of_domain_rejected():
    with pytest.raises(ValueError):
        get_problem("mbc").evaluate([0.0, 0.0])


def _random_points(problem, n, seed):
    rng = np.random.default_rng(seed)
    d = problem.domain
    return d.lower + rng.uniform(size=(n, d.n_dims)) * (d.upper - d.lower)


def test_preference_semantics():
    mbc = get_problem("mbc")
    feas_lo = [-9.0, -3.0]      # feasible
    feas_hi = [-8.0, -2.0]      # feasible, different f
    infeas = [-3.0, -6.0]       # far outside the disk
    f_lo = mbc.evaluate(feas_lo)["f"]
    f_hi = mbc.evaluate(feas_hi)["f"]
    better, worse = (feas_lo, feas_hi) if f_lo < f_hi else (feas_hi, feas_lo)
    assert synthetic_response(mbc, better, worse).preference == -1
    assert synthetic_response(mbc, worse, better).preference == 1
    assert synthetic_response(mbc, feas_lo, feas_lo).preference == 0
    # feasibility dominates the objective
    assert synthetic_response(mbc, infeas, feas_lo).preference == 1
    assert synthetic_response(mbc, feas_lo, infeas).preference == -1


def test_first_query_has_no_preference():
    mbc = get_problem("mbc")
    r = synthetic_response(mbc, [-9.0, -3.0], None)
    assert r.preference is None
    assert r.feasible == 1


def test_satisfaction_outranks_objective():
    chsc = get_problem("chsc")
    pts = _random_points(chsc, 300, 0)
    sat = [p for p in pts if chsc.evaluate(p).get("satisfactory") == 1
           and chsc.evaluate(p)["feasible"] == 1]
    unsat = [p for p in pts if chsc.evaluate(p).get("satisfactory") == 0
             and chsc.evaluate(p)["feasible"] == 1]
    assert sat and unsat
    assert synthetic_response(chsc, sat[0], unsat[0]).preference == -1


@pytest.mark.parametrize("name", ["mbc", "chc", "chsc"])
def test_antisymmetry(name):
    problem = get_problem(name)
    pts = _random_points(problem, 40, 1)
    for a, b in zip(pts[:20], pts[20:]):
        assert (synthetic_response(problem, a, b).preference
                == -synthetic_response(problem, b, a).preference)


@pytest.mark.parametrize("name", ["mbc", "chsc"])
def test_transitivity(name):
    problem = get_problem(name)
    pts = _random_points(problem, 90, 2)
    for k in range(30):
        a, b, c = pts[3 * k], pts[3 * k + 1], pts[3 * k + 2]
        if (synthetic_response(problem, a, b).preference == -1
                and synthetic_response(problem, b, c).preference == -1):
            assert synthetic_response(problem, a, c).preference == -1
