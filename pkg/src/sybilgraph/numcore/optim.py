"""
Adam optimizer and parameter initialization.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from sybilgraph.errors import NonFiniteError, ShapeError


@dataclass(frozen=True)
class AdamState:
    """
    Optimizer state for Adam.

    Parameters
    ----------
    learning_rate : float, optional
        Step size. Default is 1e-3.
    beta1 : float, optional
        First-moment decay. Default is 0.9.
    beta2 : float, optional
        Second-moment decay. Default is 0.999.
    epsilon : float, optional
        Denominator guard. Default is 1e-8.
    step : int, optional
        Number of updates applied so far.
    first_moment, second_moment : tuple[ndarray, ...], optional
        Per-parameter accumulators; empty until the first step.
    """

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first_moment: tuple[np.ndarray, ...] = field(default_factory=tuple)
    second_moment: tuple[np.ndarray, ...] = field(default_factory=tuple)


def adam_step(
    state: AdamState,
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
) -> tuple[list[np.ndarray], AdamState]:
    """
    Apply one bias-corrected Adam update.

    Parameters
    ----------
    state : AdamState
        Current optimizer state.
    params : Sequence[ndarray]
        Parameter values.
    grads : Sequence[ndarray]
        Gradients aligned with ``params``.

    Returns
    -------
    tuple[list[ndarray], AdamState]
        New parameter values and the advanced state. Inputs are not modified.

    Raises
    ------
    ShapeError
        If gradients or accumulators do not match the parameter shapes.
    NonFiniteError
        If a gradient or updated parameter is not finite.
    """
    if len(params) != len(grads):
        raise ShapeError("adam_step", (len(params),), (len(grads),))

    first = state.first_moment or tuple(np.zeros_like(p, dtype=np.float64) for p in params)
    second = state.second_moment or tuple(np.zeros_like(p, dtype=np.float64) for p in params)
    if len(first) != len(params):
        raise ShapeError("adam_step", (len(first),), (len(params),))

    step = state.step + 1
    correction1 = 1.0 - state.beta1**step
    correction2 = 1.0 - state.beta2**step

    updated, new_first, new_second = [], [], []
    for index, (param, grad, m, v) in enumerate(zip(params, grads, first, second)):
        if grad.shape != param.shape or m.shape != param.shape:
            raise ShapeError("adam_step", param.shape, grad.shape)
        if not np.all(np.isfinite(grad)):
            raise NonFiniteError(f"adam_step: gradient {index} is not finite")
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        with np.errstate(all="ignore"):
            value = param - state.learning_rate * (m / correction1) / (
                np.sqrt(v / correction2) + state.epsilon
            )
        if not np.all(np.isfinite(value)):
            raise NonFiniteError(f"adam_step: parameter {index} became non-finite")
        updated.append(value)
        new_first.append(m)
        new_second.append(v)

    return updated, replace(
        state, step=step, first_moment=tuple(new_first), second_moment=tuple(new_second)
    )


def glorot_uniform(fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples in ``±sqrt(6 / (fan_in + fan_out))``."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))
