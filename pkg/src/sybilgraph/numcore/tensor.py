"""
Dense 64-bit tensors with a reverse-mode tape.

Primitives compute eagerly with numpy. When a :class:`Tape` is active (entered
as a context manager) every primitive also records its inputs, output, and a
vector-Jacobian product closure, so :func:`backward` can walk the tape in
reverse and accumulate gradients for the parameter leaves.

The primitive set is closed: matmul, add, multiply, relu, sigmoid, tanh,
softmax (row-wise), mean_rows, concat, slice, and transpose. Everything else
in the package (losses, layers, the leaky ReLU in attention) is composed from
these, so checking each primitive's gradient checks the whole model.
"""

from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Self

import numpy as np

from sybilgraph.errors import BackwardError, NonFiniteError, ShapeError

Array = np.ndarray
VJP = Callable[[Array], tuple[Array | None, ...]]


class Tensor:
    """
    Immutable dense array of float64 values.

    Parameters
    ----------
    data : array_like
        Values; copied and converted to float64.
    requires_grad : bool, optional
        Whether :func:`backward` reports a gradient for this leaf.
    name : str | None, optional
        Label used in diagnostics.

    Raises
    ------
    NonFiniteError
        If ``data`` holds NaN or infinite values.
    """

    __slots__ = ("data", "requires_grad", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None) -> None:
        array = np.array(data, dtype=np.float64)
        _check_finite(name or "tensor", array)
        array.setflags(write=False)
        self.data = array
        self.requires_grad = requires_grad
        self.name = name

    @classmethod
    def _wrap(cls, array: Array) -> "Tensor":
        tensor = cls.__new__(cls)
        array.setflags(write=False)
        tensor.data = array
        tensor.requires_grad = False
        tensor.name = None
        return tensor

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def item(self) -> float:
        """
        Value of a size-1 tensor.

        Raises
        ------
        ShapeError
            If the tensor holds more or fewer than one value.
        """
        if self.data.size != 1:
            raise ShapeError("item", self.shape, (1,))
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> Array:
        """Writable copy of the values."""
        return self.data.copy()

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"Tensor{label}(shape={self.shape}, requires_grad={self.requires_grad})"


def parameter(data, name: str | None = None) -> Tensor:
    """Leaf tensor whose gradient :func:`backward` reports."""
    return Tensor(data, requires_grad=True, name=name)


def constant(data) -> Tensor:
    """Leaf tensor treated as a constant by :func:`backward`."""
    return Tensor(data)


@dataclass(slots=True)
class TapeEntry:
    """One recorded primitive call."""

    op: str
    inputs: tuple[Tensor, ...]
    output: Tensor
    vjp: VJP


_active_tape: ContextVar["Tape | None"] = ContextVar("sybilgraph_active_tape", default=None)


class Tape:
    """
    Ordered record of primitive calls.

    Entries are appended in execution order, so every entry's inputs were
    produced by earlier entries or are leaves.

    Examples
    --------
    >>> w = parameter([3.0])
    >>> with Tape() as tape:
    ...     loss = mse_loss(w, constant([0.0]))
    >>> backward(tape, loss)[w]
    array([6.])
    """

    def __init__(self) -> None:
        self.entries: list[TapeEntry] = []
        self._token = None

    def __enter__(self) -> Self:
        self._token = _active_tape.set(self)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        _active_tape.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self.entries)

    def record(self, entry: TapeEntry) -> None:
        self.entries.append(entry)


@contextmanager
def no_tape() -> Iterator[None]:
    """Evaluate primitives without recording, even inside an active tape."""
    token = _active_tape.set(None)
    try:
        yield
    finally:
        _active_tape.reset(token)


def _check_finite(op: str, array: Array) -> None:
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{op} produced non-finite values")


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else constant(value)


def _emit(op: str, inputs: tuple[Tensor, ...], out: Array, vjp: VJP) -> Tensor:
    _check_finite(op, out)
    result = Tensor._wrap(out)
    tape = _active_tape.get()
    if tape is not None:
        tape.record(TapeEntry(op=op, inputs=inputs, output=result, vjp=vjp))
    return result


def _unbroadcast(grad: Array, shape: tuple[int, ...]) -> Array:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: Tensor, b: Tensor) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(op, a.shape, b.shape) from None


def matmul(a, b) -> Tensor:
    """
    Matrix product of two 2-D tensors.

    Raises
    ------
    ShapeError
        If either operand is not 2-D or the inner dimensions differ.
    """
    a, b = _as_tensor(a), _as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError("matmul", a.shape, b.shape)
    with np.errstate(all="ignore"):
        out = a.data @ b.data

    def vjp(g: Array) -> tuple[Array, Array]:
        return g @ b.data.T, a.data.T @ g

    return _emit("matmul", (a, b), out, vjp)


def add(a, b) -> Tensor:
    """Elementwise sum with numpy broadcasting."""
    a, b = _as_tensor(a), _as_tensor(b)
    _broadcast_shape("add", a, b)
    with np.errstate(all="ignore"):
        out = a.data + b.data

    def vjp(g: Array) -> tuple[Array, Array]:
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _emit("add", (a, b), out, vjp)


def multiply(a, b) -> Tensor:
    """Elementwise product with numpy broadcasting."""
    a, b = _as_tensor(a), _as_tensor(b)
    _broadcast_shape("multiply", a, b)
    with np.errstate(all="ignore"):
        out = a.data * b.data

    def vjp(g: Array) -> tuple[Array, Array]:
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return _emit("multiply", (a, b), out, vjp)


def relu(x) -> Tensor:
    """Rectified linear unit; the subgradient at 0 is 0."""
    x = _as_tensor(x)
    out = np.maximum(x.data, 0.0)

    def vjp(g: Array) -> tuple[Array]:
        return (g * (x.data > 0.0),)

    return _emit("relu", (x,), out, vjp)


def sigmoid(x) -> Tensor:
    """Logistic function, evaluated as ``(1 + tanh(x / 2)) / 2`` to avoid overflow."""
    x = _as_tensor(x)
    out = 0.5 * (1.0 + np.tanh(0.5 * x.data))

    def vjp(g: Array) -> tuple[Array]:
        return (g * out * (1.0 - out),)

    return _emit("sigmoid", (x,), out, vjp)


def tanh(x) -> Tensor:
    x = _as_tensor(x)
    out = np.tanh(x.data)

    def vjp(g: Array) -> tuple[Array]:
        return (g * (1.0 - out * out),)

    return _emit("tanh", (x,), out, vjp)


def softmax(x) -> Tensor:
    """Softmax along the last axis (row-wise for matrices)."""
    x = _as_tensor(x)
    if x.data.ndim == 0 or x.shape[-1] == 0:
        raise ShapeError("softmax", x.shape, ())
    shifted = x.data - x.data.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    out = exp / exp.sum(axis=-1, keepdims=True)

    def vjp(g: Array) -> tuple[Array]:
        return (out * (g - (g * out).sum(axis=-1, keepdims=True)),)

    return _emit("softmax", (x,), out, vjp)


def mean_rows(x) -> Tensor:
    """
    Mean over the first axis, keeping it with size 1.

    Raises
    ------
    ShapeError
        If the tensor has no rows.
    """
    x = _as_tensor(x)
    if x.data.ndim == 0 or x.shape[0] == 0:
        raise ShapeError("mean_rows", x.shape, ())
    rows = x.shape[0]
    out = x.data.mean(axis=0, keepdims=True)

    def vjp(g: Array) -> tuple[Array]:
        return (np.broadcast_to(g / rows, x.shape).copy(),)

    return _emit("mean_rows", (x,), out, vjp)


def concat(tensors: Sequence, axis: int = 1) -> Tensor:
    """
    Join tensors along ``axis``.

    Raises
    ------
    ShapeError
        If the tensors disagree on any other axis.
    """
    parts = tuple(_as_tensor(t) for t in tensors)
    if not parts:
        raise ShapeError("concat", (), ())
    first = parts[0]
    for part in parts[1:]:
        if part.data.ndim != first.data.ndim or any(
            part.shape[i] != first.shape[i] for i in range(first.data.ndim) if i != axis % first.data.ndim
        ):
            raise ShapeError("concat", first.shape, part.shape)
    out = np.concatenate([p.data for p in parts], axis=axis)
    bounds = np.cumsum([0] + [p.shape[axis] for p in parts])

    def vjp(g: Array) -> tuple[Array, ...]:
        return tuple(
            np.take(g, np.arange(bounds[i], bounds[i + 1]), axis=axis) for i in range(len(parts))
        )

    return _emit("concat", parts, out, vjp)


def slice(x, start: int, stop: int, axis: int = 1) -> Tensor:
    """
    Contiguous slice ``[start, stop)`` along ``axis``.

    Raises
    ------
    ShapeError
        If the range falls outside the axis.
    """
    x = _as_tensor(x)
    if not 0 <= start <= stop <= x.shape[axis]:
        raise ShapeError("slice", x.shape, (start, stop))
    index = [np.s_[:]] * x.data.ndim
    index[axis] = np.s_[start:stop]
    index = tuple(index)
    out = x.data[index].copy()

    def vjp(g: Array) -> tuple[Array]:
        grad = np.zeros_like(x.data)
        grad[index] = g
        return (grad,)

    return _emit("slice", (x,), out, vjp)


def transpose(x) -> Tensor:
    """Swap the axes of a matrix (identity on vectors)."""
    x = _as_tensor(x)
    if x.data.ndim > 2:
        raise ShapeError("transpose", x.shape, ())
    out = x.data.T.copy()

    def vjp(g: Array) -> tuple[Array]:
        return (g.T.copy(),)

    return _emit("transpose", (x,), out, vjp)


def subtract(a, b) -> Tensor:
    return add(a, multiply(b, -1.0))


def leaky_relu(x, slope: float = 0.2) -> Tensor:
    """``relu(x) - slope * relu(-x)``."""
    return add(relu(x), multiply(relu(multiply(x, -1.0)), -slope))


def mse_loss(predicted, target) -> Tensor:
    """
    Mean over all elements of the squared difference.

    Returns
    -------
    Tensor
        Size-1 tensor.

    Raises
    ------
    ShapeError
        If the shapes differ.
    """
    predicted, target = _as_tensor(predicted), _as_tensor(target)
    if predicted.shape != target.shape:
        raise ShapeError("mse_loss", predicted.shape, target.shape)
    diff = subtract(predicted, target)
    return mean_rows(transpose(mean_rows(multiply(diff, diff))))


Gradients = dict[Tensor, Array]


def backward(tape: Tape, loss: Tensor, params: Sequence[Tensor] = ()) -> Gradients:
    """
    Reverse-mode gradients of a scalar loss recorded on ``tape``.

    Parameters
    ----------
    tape : Tape
        Tape the loss was computed on.
    loss : Tensor
        Size-1 output of a recorded primitive.
    params : Sequence[Tensor], optional
        Parameters to report even if the loss does not depend on them (they
        get zero gradients).

    Returns
    -------
    dict[Tensor, ndarray]
        Gradient for every ``requires_grad`` leaf reached from the loss, plus
        every entry of ``params``. Constants get none.

    Raises
    ------
    BackwardError
        If the loss is not scalar or was not produced on this tape.
    """
    if loss.data.size != 1:
        raise BackwardError(f"loss must be scalar, got shape {loss.shape}")

    produced = {id(entry.output) for entry in tape.entries}
    if id(loss) not in produced:
        raise BackwardError("loss was not produced on this tape")

    pending: dict[int, Array] = {id(loss): np.ones_like(loss.data)}
    leaves: dict[int, Tensor] = {}
    leaf_grads: dict[int, Array] = {}

    for entry in reversed(tape.entries):
        grad = pending.pop(id(entry.output), None)
        if grad is None:
            continue
        for tensor, input_grad in zip(entry.inputs, entry.vjp(grad)):
            if input_grad is None:
                continue
            key = id(tensor)
            if tensor.requires_grad:
                leaves[key] = tensor
                leaf_grads[key] = leaf_grads[key] + input_grad if key in leaf_grads else input_grad
            elif key in produced:
                pending[key] = pending[key] + input_grad if key in pending else input_grad

    gradients: Gradients = {leaves[key]: leaf_grads[key] for key in leaves}
    for param in params:
        if param not in gradients:
            gradients[param] = np.zeros_like(param.data)
    return gradients
