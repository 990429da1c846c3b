"""
Central finite-difference check of tape gradients.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from sybilgraph.errors import NonFiniteError
from sybilgraph.log import get_logger
from sybilgraph.numcore.tensor import Tape, Tensor, backward, no_tape, parameter

logger = get_logger(__name__)

DEFAULT_STEP = 1e-5
RELATIVE_FLOOR = 1e-3


@dataclass
class GradCheckReport:
    """
    Result of :func:`finite_diff_check`.

    Parameters
    ----------
    max_relative_error : float
        Largest ``|a - n| / max(|a|, |n|, 1e-3)`` over all elements.
    tolerance : float
        Threshold the check was run against.
    passed : bool
        Whether ``max_relative_error < tolerance``.
    analytic : ndarray
        Tape gradient.
    numeric : ndarray
        Central-difference estimate.
    error : str | None
        Why the check could not be evaluated, if ``f`` produced non-finite
        values; the arrays are then NaN.
    """

    max_relative_error: float
    tolerance: float
    passed: bool
    analytic: np.ndarray
    numeric: np.ndarray
    error: str | None = None


def finite_diff_check(
    f: Callable[[Tensor], Tensor],
    point: np.ndarray,
    tolerance: float = 1e-4,
    step: float = DEFAULT_STEP,
) -> GradCheckReport:
    """
    Compare tape gradients of ``f`` at ``point`` with central differences.

    Parameters
    ----------
    f : Callable[[Tensor], Tensor]
        Scalar-valued function built from numcore primitives.
    point : ndarray
        Where to evaluate the gradient.
    tolerance : float, optional
        Pass threshold on the maximum relative error. Default is 1e-4.
    step : float, optional
        Finite-difference step ``h``. Default is 1e-5.

    Returns
    -------
    GradCheckReport
        The comparison; failures are reported, never raised.
    """
    point = np.array(point, dtype=np.float64)
    param = parameter(point)
    numeric = np.zeros_like(point)
    try:
        with Tape() as tape:
            loss = f(param)
        analytic = backward(tape, loss, params=[param])[param]

        with no_tape():
            for index in np.ndindex(point.shape):
                shifted = point.copy()
                shifted[index] = point[index] + step
                upper = f(Tensor(shifted)).item()
                shifted[index] = point[index] - step
                lower = f(Tensor(shifted)).item()
                numeric[index] = (upper - lower) / (2.0 * step)
    except NonFiniteError as e:
        logger.warning("Gradient check hit non-finite values: %s", e.message)
        return GradCheckReport(
            max_relative_error=math.inf,
            tolerance=tolerance,
            passed=False,
            analytic=np.full_like(point, np.nan),
            numeric=np.full_like(point, np.nan),
            error=e.message,
        )

    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), RELATIVE_FLOOR)
    errors = np.abs(analytic - numeric) / scale
    max_error = float(errors.max()) if errors.size else 0.0
    return GradCheckReport(
        max_relative_error=max_error,
        tolerance=tolerance,
        passed=max_error < tolerance,
        analytic=analytic,
        numeric=numeric,
    )
