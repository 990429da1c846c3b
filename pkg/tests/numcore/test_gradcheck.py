import numpy as np
import pytest

from sybilgraph.numcore import (
    concat,
    constant,
    finite_diff_check,
    leaky_relu,
    matmul,
    mean_rows,
    mse_loss,
    multiply,
    sigmoid,
    slice,
    softmax,
    tanh,
    transpose,
)

RNG = np.random.default_rng(11)
TARGET = constant(RNG.normal(size=(3, 4)))
WEIGHT = constant(RNG.normal(size=(4, 4)))


def _scalar(t):
    return mean_rows(transpose(mean_rows(t)))


PRIMITIVE_LOSSES = {
    "matmul": lambda x: mse_loss(matmul(x, WEIGHT), TARGET),
    "sigmoid": lambda x: mse_loss(sigmoid(x), TARGET),
    "tanh": lambda x: mse_loss(tanh(x), TARGET),
    "softmax": lambda x: _scalar(multiply(softmax(x), TARGET)),
    "leaky_relu": lambda x: mse_loss(leaky_relu(x), TARGET),
    "concat_slice": lambda x: _scalar(slice(concat([x, tanh(x)], axis=1), 2, 6)),
    "transpose": lambda x: mse_loss(transpose(matmul(x, WEIGHT)), transpose(TARGET)),
}


@pytest.mark.parametrize("name", sorted(PRIMITIVE_LOSSES))
def test_primitive_gradients_match_central_differences(name):
    point = np.random.default_rng(5).normal(size=(3, 4))
    report = finite_diff_check(PRIMITIVE_LOSSES[name], point)
    assert report.passed, f"{name}: max relative error {report.max_relative_error}"
    assert report.analytic.shape == point.shape


def test_detached_gradient_is_reported_not_raised():
    def detached(x):
        return mse_loss(constant(x.data), constant(np.zeros((3, 4))))

    report = finite_diff_check(detached, np.ones((3, 4)))
    assert not report.passed
    np.testing.assert_array_equal(report.analytic, np.zeros((3, 4)))
    assert report.max_relative_error == pytest.approx(1.0)


def test_overflowing_function_is_reported_not_raised():
    def overflowing(x):
        return mse_loss(multiply(x, constant(np.full((3, 4), 1e200))), constant(np.zeros((3, 4))))

    report = finite_diff_check(overflowing, np.ones((3, 4)))
    assert not report.passed
    assert report.max_relative_error == np.inf
    assert "non-finite" in report.error
    assert np.isnan(report.numeric).all()
