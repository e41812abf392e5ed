import numpy as np
import pytest

import bdlimits as bd
from bdlimits.fluid import _rk4


def test_field_cancels_for_equal_matrices():
    m = np.array([[0.4, -0.1], [-0.1, 0.4]])
    g = np.array([0.7, -2.0])
    assert np.array_equal(bd.vector_field(m, m, g), np.zeros(2))


def test_field_vanishes_at_origin():
    ab = np.array([[0.5, 0.2], [0.2, 0.5]])
    ad = np.array([[-0.3, 0.0], [0.0, -0.3]])
    assert np.array_equal(bd.vector_field(ab, ad, [0.0, 0.0]), np.zeros(2))


def test_field_hand_value():
    assert bd.vector_field([[0.0]], [[1.0]], [np.log(2.0)])[0] == pytest.approx(-1.0)


def test_field_overflow():
    with pytest.raises(bd.ExponentOverflowError) as exc:
        bd.vector_field([[1000.0]], [[0.0]], [1.0])
    assert exc.value.vertex == 0


def test_field_dimension_checks():
    with pytest.raises(bd.DimensionMismatchError):
        bd.vector_field(np.zeros((2, 2)), np.zeros((3, 3)), [0.0, 0.0])
    with pytest.raises(bd.DimensionMismatchError):
        bd.vector_field(np.zeros((2, 2)), np.zeros((2, 2)), [0.0, 0.0, 0.0])


def test_constant_path_for_equal_matrices():
    m = np.array([[0.4, -0.1], [-0.1, 0.4]])
    path = bd.rk4_integrate(m, m, [1.0, -2.0], dt=0.01, t_end=3.0)
    assert np.abs(path.states - np.array([1.0, -2.0])).max() == 0.0


def test_injected_linear_field_is_fourth_order():
    # testing seam: closed-form reference for du/dt = -u
    path = _rk4(lambda g, t: -g, np.array([1.0]), 0.01, 1.0)
    assert abs(path.terminal[0] - np.exp(-1.0)) < 1e-9


def test_single_vertex_decay_toward_fixed_point():
    path = bd.rk4_integrate([[0.0]], [[1.0]], [1.0], dt=1e-3, t_end=5.0)
    vals = path.states[:, 0]
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] > 0.0
    reference = bd.rk4_integrate([[0.0]], [[1.0]], [1.0], dt=1e-5, t_end=5.0)
    assert abs(path.terminal[0] - reference.terminal[0]) < 1e-10


def test_step_halving_shrinks_error_sixteen_fold():
    reference = bd.rk4_integrate([[0.0]], [[1.0]], [1.0], dt=5e-4, t_end=2.0).terminal[0]
    errs = []
    for dt in (0.1, 0.05):
        errs.append(abs(bd.rk4_integrate([[0.0]], [[1.0]], [1.0], dt=dt, t_end=2.0).terminal[0] - reference))
    ratio = errs[1] / errs[0]
    assert 1 / 24 < ratio < 1 / 10


def test_fixed_point_stays_fixed():
    # exp((A_b g)_x) = exp((A_d g)_x) at g* = 0 for any matrices
    path = bd.rk4_integrate([[0.2]], [[0.7]], [0.0], dt=1e-2, t_end=10.0)
    assert np.abs(path.states).max() < 1e-10


def test_field_sign_matches_negative_state():
    for gamma in (-1.5, -0.2, 0.3, 2.0):
        val = bd.vector_field([[0.0]], [[1.0]], [gamma])[0]
        assert np.sign(val) == -np.sign(gamma)


def test_overflow_reports_time_and_vertex():
    # explosive field: gamma' = e^gamma, blows past exp range in finite time
    with pytest.raises(bd.ExponentOverflowError) as exc:
        bd.rk4_integrate([[1.0]], [[0.0]], [5.0], dt=1e-3, t_end=50.0)
    assert exc.value.time is not None and exc.value.time > 0
    assert exc.value.vertex == 0


def test_sample_path_validation():
    with pytest.raises(bd.ValidationError):
        bd.SamplePath(times=np.array([0.0, 1.0, 0.5]), states=np.zeros((3, 1)))
    with pytest.raises(bd.ValidationError):
        bd.SamplePath(times=np.array([0.5, 1.0]), states=np.zeros((2, 1)))
    path = bd.SamplePath(times=np.array([0.0, 1.0]), states=np.array([[0.0], [2.0]]))
    assert path.at([0.5])[0, 0] == pytest.approx(1.0)
    with pytest.raises(bd.ValidationError):
        path.at([2.0])
