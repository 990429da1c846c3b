import numpy as np
import numpy.testing as npt
import pytest

from sybilgraph.errors import NonFiniteError, ShapeError
from sybilgraph.numcore import AdamState, adam_step, glorot_uniform


def test_first_step_moves_each_weight_by_learning_rate():
    params = [np.array([1.0, -2.0]), np.array([[0.5]])]
    grads = [np.array([0.3, -4.0]), np.array([[2.0]])]
    updated, state = adam_step(AdamState(learning_rate=0.1), params, grads)
    # bias-corrected first step is lr * sign(grad) up to epsilon
    npt.assert_allclose(updated[0], [0.9, -1.9], atol=1e-6)
    npt.assert_allclose(updated[1], [[0.4]], atol=1e-6)
    assert state.step == 1
    npt.assert_array_equal(params[0], [1.0, -2.0])


def test_minimizes_a_quadratic():
    x = [np.array([5.0, -3.0])]
    state = AdamState(learning_rate=0.05)
    for _ in range(1000):
        x, state = adam_step(state, x, [2.0 * x[0]])
    npt.assert_allclose(x[0], [0.0, 0.0], atol=0.1)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        adam_step(AdamState(), [np.zeros(2)], [np.zeros(3)])
    with pytest.raises(ShapeError):
        adam_step(AdamState(), [np.zeros(2)], [])


def test_non_finite_gradient():
    with pytest.raises(NonFiniteError):
        adam_step(AdamState(), [np.zeros(2)], [np.array([np.inf, 0.0])])


def test_glorot_uniform_bounds_and_determinism():
    a = glorot_uniform(10, 6, np.random.default_rng(0))
    b = glorot_uniform(10, 6, np.random.default_rng(0))
    assert a.shape == (10, 6)
    assert np.abs(a).max() <= np.sqrt(6.0 / 16.0)
    npt.assert_array_equal(a, b)
