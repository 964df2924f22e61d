import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tropfw import DimensionError, InvalidInput
from tropfw.tropical import as_sample, fw_objective, normalize, points_equal, trop_ball_generators, trop_distance

from conftest import GOLDEN

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_normalize_pins_first_coordinate():
    assert normalize([5, 8, 9]).tolist() == [0.0, 3.0, 4.0]


@pytest.mark.parametrize("bad", [[1.0], [[1.0, 2.0]], []])
def test_normalize_rejects_bad_shapes(bad):
    with pytest.raises(DimensionError):
        normalize(bad)


def test_normalize_rejects_nan():
    with pytest.raises(InvalidInput):
        normalize([0, np.nan])


def test_as_sample_normalizes_rows_and_promotes_vectors():
    V = as_sample([[1, 2, 3], [4, 4, 4]])
    assert V.tolist() == [[0, 1, 2], [0, 0, 0]]
    assert as_sample([2, 3]).shape == (1, 2)
    with pytest.raises(DimensionError):
        as_sample([[1], [2]])
    with pytest.raises(InvalidInput):
        as_sample([[0, np.inf]])


def test_distance_hand_value():
    # u - v = (0, -3, -1): max 0, min -3
    assert trop_distance([0, 0, 0], [0, 3, 1]) == 3.0


def test_distance_broadcasts():
    X = np.array([[0, 0, 0], [0, 3, 1], [7, 7, 7]])
    assert trop_distance(X, [0, 3, 1]).tolist() == [3.0, 0.0, 3.0]


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionError):
        trop_distance([0, 1], [0, 1, 2])


def test_objective_at_golden_vertex():
    assert fw_objective(GOLDEN, [0, 3, 5]) == 12.0
    assert fw_objective(GOLDEN, [[0, 3, 5], [0, 0, 0]]).tolist() == [12.0, 16.0]  # 5 + 2 + 3 + 6


def test_points_equal_is_projective():
    assert points_equal([1, 2, 3], [0, 1, 2])
    assert not points_equal([0, 1, 2], [0, 1, 2.1])


def test_ball_generators_sit_at_radius():
    gens = trop_ball_generators([0, 1, 2], 1.5)
    assert len(gens) == 3
    assert all(g[0] == 0 for g in gens)
    assert np.allclose([trop_distance(g, [0, 1, 2]) for g in gens], 1.5)
    with pytest.raises(InvalidInput):
        trop_ball_generators([0, 1, 2], 0)


@settings(max_examples=200, deadline=None)
@given(arrays(float, (3, 4), elements=finite))
def test_metric_axioms(P):
    u, v, w = P
    assert trop_distance(u, u) == 0
    assert trop_distance(u, v) >= 0
    assert trop_distance(u, v) == pytest.approx(trop_distance(v, u), abs=1e-9)
    assert trop_distance(u, w) <= trop_distance(u, v) + trop_distance(v, w) + 1e-9


@settings(max_examples=200, deadline=None)
@given(arrays(float, (4, 3), elements=finite), arrays(float, 3, elements=finite), finite)
def test_objective_is_translation_invariant(V, x, c):
    assert fw_objective(V, x + c) == pytest.approx(fw_objective(V, x), abs=1e-8)
    assert fw_objective(V + c, x) == pytest.approx(fw_objective(V, x), abs=1e-8)


def test_more_hand_values():
    assert trop_distance([0, 3, 4], [0, 0, 5]) == 4.0
    assert normalize([4, 4, 4]).tolist() == [0, 0, 0]
    assert fw_objective([[0, 2, 7]], [0, 2, 7]) == 0.0


def test_ball_generators_labels():
    gens = trop_ball_generators([0, 2, 5], 1.0)
    assert [g.tolist() for g in gens] == [[0, 1, 4], [0, 3, 5], [0, 2, 6]]
    assert [g.tolist() for g in trop_ball_generators([0, 0], 1.0)] == [[0, -1], [0, 1]]


@settings(max_examples=200, deadline=None)
@given(arrays(float, (3, 4), elements=finite), st.floats(0, 1))
def test_objective_is_convex(P, lam):
    V = P[:2]
    x, y = P[2], P[0] * 0.5 - P[1]
    lhs = fw_objective(V, lam * x + (1 - lam) * y)
    assert lhs <= lam * fw_objective(V, x) + (1 - lam) * fw_objective(V, y) + 1e-8
