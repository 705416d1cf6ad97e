import numpy as np
import pytest
from hypothesis import given, strategies as st

from prefopt.model import (BoundsViolationError, Dataset, DimensionMismatchError,
                           Domain, DuplicateSampleError, QueryResponse,
                           squared_distance)


def test_scale_corners_and_midpoint():
    d = Domain(np.array([-2.0, -1.0]), np.array([2.0, 1.0]))
    assert np.allclose(d.scale_to_unit([-2, -1]), [0, 0])
    assert np.allclose(d.scale_to_unit([2, 1]), [1, 1])
    d2 = Domain(np.array([-10.0, -6.5]), np.array([-2.0, 0.0]))
    assert np.allclose(d2.scale_to_unit([-6, -3.25]), [0.5, 0.5])


def test_scale_out_of_bounds_names_dimension():
    d = Domain(np.array([0.0, 0.0]), np.array([1.0, 2.0]))
    with pytest.raises(BoundsViolationError, match="1"):
        d.scale_to_unit([0.5, 2.5])


def test_invalid_domain():
    with pytest.raises(ValueError):
        Domain(np.array([1.0]), np.array([1.0]))
    with pytest.raises(DimensionMismatchError):
        Domain(np.array([0.0, 0.0]), np.array([1.0]))


@given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=6))
def test_scale_roundtrip(coords):
    n = len(coords)
    d = Domain(np.full(n, -3.0), np.full(n, 7.5))
    x = d.unscale(np.array(coords))
    assert np.max(np.abs(d.scale_to_unit(x) - coords)) <= 1e-12


def test_squared_distance_examples():
    assert squared_distance([0.3, 0.7], [0.3, 0.7]) == 0
    assert squared_distance([0, 0], [3, 4]) == 25
    assert squared_distance([1], [-1]) == 4
    with pytest.raises(DimensionMismatchError):
        squared_distance([1, 2], [1])


@given(st.lists(st.floats(-10, 10), min_size=2, max_size=5),
       st.lists(st.floats(-10, 10), min_size=2, max_size=5))
def test_squared_distance_symmetry(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    assert squared_distance(a, b) == squared_distance(b, a)
    assert squared_distance(a, a) == 0


def _domain():
    return Domain(np.array([0.0, 0.0]), np.array([1.0, 1.0]))


def test_append_first_sample():
    ds = Dataset(_domain())
    ds.append_sample([0.2, 0.2], QueryResponse(preference=None, feasible=1))
    assert ds.n_samples == 1
    assert len(ds.preferences) == 0
    assert ds.best_index == 0


def test_append_second_sample_preferred():
    ds = Dataset(_domain())
    ds.append_sample([0.2, 0.2], QueryResponse(preference=None, feasible=1))
    ds.append_sample([0.8, 0.8], QueryResponse(preference=-1, feasible=1))
    assert ds.n_samples == 2
    assert ds.preferences == [(1, 0, -1)]
    assert ds.best_index == 1


def test_append_tie_keeps_incumbent():
    ds = Dataset(_domain())
    ds.append_sample([0.2, 0.2], QueryResponse(preference=None, feasible=1))
    ds.append_sample([0.8, 0.8], QueryResponse(preference=0, feasible=1))
    assert ds.best_index == 0


def test_duplicate_rejected():
    ds = Dataset(_domain())
    ds.append_sample([0.2, 0.2], QueryResponse(preference=None, feasible=1))
    with pytest.raises(DuplicateSampleError):
        ds.append_sample([0.2, 0.2], QueryResponse(preference=1, feasible=1))


def test_preference_count_is_n_minus_one():
    rng = np.random.default_rng(0)
    ds = Dataset(_domain())
    ds.append_sample(rng.uniform(size=2), QueryResponse(None, 1))
    for _ in range(49):
        ds.append_sample(rng.uniform(size=2),
                         QueryResponse(int(rng.choice([-1, 0, 1])), 1))
    assert ds.n_samples == 50
    assert len(ds.preferences) == 49


def test_json_roundtrip():
    ds = Dataset(_domain())
    ds.append_sample([0.2, 0.3], QueryResponse(None, 1, 0))
    ds.append_sample([0.7, 0.1], QueryResponse(-1, 0, 1))
    restored = Dataset.loads(ds.dumps())
    assert restored.dumps() == ds.dumps()
    assert restored.best_index == 1
    assert np.array_equal(restored.unit_points(), ds.unit_points())


def test_query_response_validation():
    with pytest.raises(ValueError):
        QueryResponse(preference=2, feasible=1)
    with pytest.raises(ValueError):
        QueryResponse(preference=0, feasible=5)
