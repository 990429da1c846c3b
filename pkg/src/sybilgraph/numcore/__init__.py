"""
Numeric core module.

Minimal dense-tensor library with reverse-mode differentiation and an Adam
optimizer, sufficient to train the graph embedder.

Classes
-------
Tensor
    Immutable float64 array.
Tape
    Context manager recording primitive calls for :func:`backward`.
AdamState
    Optimizer accumulators and hyperparameters.
"""

from sybilgraph.numcore.gradcheck import GradCheckReport, finite_diff_check
from sybilgraph.numcore.optim import AdamState, adam_step, glorot_uniform
from sybilgraph.numcore.tensor import (
    Gradients,
    Tape,
    TapeEntry,
    Tensor,
    add,
    backward,
    concat,
    constant,
    leaky_relu,
    matmul,
    mean_rows,
    mse_loss,
    multiply,
    no_tape,
    parameter,
    relu,
    sigmoid,
    slice,
    softmax,
    subtract,
    tanh,
    transpose,
)

__all__ = [
    "Tensor",
    "Tape",
    "TapeEntry",
    "Gradients",
    "parameter",
    "constant",
    "no_tape",
    "matmul",
    "add",
    "multiply",
    "relu",
    "sigmoid",
    "tanh",
    "softmax",
    "mean_rows",
    "concat",
    "slice",
    "transpose",
    "subtract",
    "leaky_relu",
    "mse_loss",
    "backward",
    "AdamState",
    "adam_step",
    "glorot_uniform",
    "GradCheckReport",
    "finite_diff_check",
]
