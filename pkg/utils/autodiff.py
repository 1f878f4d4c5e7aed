# utils/autodiff.py

"""
autodiff.py – Reverse-Mode Automatic Differentiation

Provides the `Tensor` type every model computation is expressed in: a 64-bit
numpy array plus an optional record of the operation that produced it. Calling
`backward()` on a scalar walks that record in reverse topological order and
deposits d(loss)/d(tensor) on every leaf that requires gradients and on every
intermediate tensor flagged with `retain_grad()`.

Broadcast rules: elementwise primitives (add, sub, mul, div) follow numpy
broadcasting; `matmul` multiplies the last two axes and broadcasts the leading
ones; `softmax` normalises along one axis after adding a constant mask that must
broadcast to the input shape; `concat` and `stack` require equal shapes except
along the joined axis.

Graphs are plain Python objects with no global registry, so separate graphs may
be built and differentiated from separate threads. The only process-wide state is
the per-thread `no_grad()` switch.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, UsageError

DTYPE = np.float64

# Grad-recording switch, kept per thread so concurrent inference cannot disable
# recording for a training thread.
_grad_state: threading.local = threading.local()

BackwardFn = Callable[[np.ndarray], Sequence["np.ndarray | None"]]


def is_grad_enabled() -> bool:
    """Returns True when new operations are recorded for differentiation."""
    return getattr(_grad_state, "enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """
    Context manager that stops recording operations on the current thread.

    Forward results computed inside the block carry no graph, which makes
    evaluation cheaper; values are bitwise identical to recorded evaluation.
    """
    previous = is_grad_enabled()
    _grad_state.enabled = False
    try:
        yield
    finally:
        _grad_state.enabled = previous


class Tensor:
    """
    n-dimensional float64 array participating in a differentiable graph.

    Attributes:
        data (np.ndarray): Row-major values; `data.size == prod(shape)`.
        grad (np.ndarray | None): Accumulated gradient, same shape as `data`.
        requires_grad (bool): Whether gradients flow to / through this tensor.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "_op", "_retain")
    # Makes `ndarray * Tensor` dispatch to Tensor.__rmul__.
    __array_priority__ = 100

    def __init__(self, data: Any, requires_grad: bool = False):
        self.data: np.ndarray = np.array(data, dtype=DTYPE)
        self.grad: np.ndarray | None = None
        self.requires_grad: bool = requires_grad
        self._parents: tuple[Tensor, ...] = ()
        self._backward: BackwardFn | None = None
        self._op: str = ""
        self._retain: bool = False

    @staticmethod
    def _from_op(data: np.ndarray, parents: tuple[Tensor, ...], op: str, backward: BackwardFn) -> Tensor:
        """Wraps an op result, recording it only when some operand needs gradients."""
        out = Tensor.__new__(Tensor)
        out.data = np.asarray(data, dtype=DTYPE)
        out.grad = None
        out._op = op
        out._retain = False
        track = is_grad_enabled() and any(p.requires_grad for p in parents)
        out.requires_grad = track
        out._parents = parents if track else ()
        out._backward = backward if track else None
        return out

    # ── introspection ────────────────────────────────────────
    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def is_leaf(self) -> bool:
        return not self._parents

    @property
    def op(self) -> str:
        return self._op

    def item(self) -> float:
        if self.data.size != 1:
            raise UsageError(f"item() needs a single-element tensor, got shape {list(self.shape)}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> Tensor:
        return Tensor(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, op={self._op or 'leaf'!r}, requires_grad={self.requires_grad})"

    # ── gradient bookkeeping ────────────────────────────────
    def retain_grad(self) -> None:
        """
        Keeps d(loss)/d(self) after `backward()` for a non-leaf tensor.

        The buffer starts at zero, so a tensor the loss does not depend on reads
        back an exact zero gradient. Leaves that require gradients already keep
        theirs; for them this is a no-op.
        """
        if self.is_leaf and self.requires_grad:
            return
        self._retain = True
        if self.grad is None:
            self.grad = np.zeros_like(self.data)

    def zero_grad(self) -> None:
        self.grad = None if not self._retain else np.zeros_like(self.data)

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.array(g, dtype=DTYPE)
        else:
            self.grad = self.grad + g

    def _topological_order(self) -> list[Tensor]:
        # Iterative DFS post-order; recursive versions overflow on long LSTM graphs.
        order: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in reversed(node._parents):
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        """
        Back-propagates from this scalar through the recorded graph.

        Leaves requiring gradients and retained tensors accumulate into `.grad`
        (additively across calls until cleared). Traversal order is the fixed
        topological order of the graph, so repeated runs are bitwise identical.

        Raises:
            UsageError: If the tensor is not a scalar or carries no graph.
        """
        if self.data.size != 1:
            raise UsageError(f"backward() needs a scalar loss, got shape {list(self.shape)}")
        if not self.requires_grad:
            raise UsageError("backward() called on a tensor that is not part of a recorded graph")

        grads: dict[int, np.ndarray] = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node._retain or node.is_leaf:
                node._accumulate(g)
            if node._backward is None:
                continue
            for parent, pg in zip(node._parents, node._backward(g)):
                if pg is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = grads[key] + pg if key in grads else pg

    # ── operator sugar ───────────────────────────────────────
    def __add__(self, other: Any) -> Tensor:
        return add(self, other)

    def __radd__(self, other: Any) -> Tensor:
        return add(other, self)

    def __sub__(self, other: Any) -> Tensor:
        return sub(self, other)

    def __rsub__(self, other: Any) -> Tensor:
        return sub(other, self)

    def __mul__(self, other: Any) -> Tensor:
        return mul(self, other)

    def __rmul__(self, other: Any) -> Tensor:
        return mul(other, self)

    def __truediv__(self, other: Any) -> Tensor:
        return div(self, other)

    def __rtruediv__(self, other: Any) -> Tensor:
        return div(other, self)

    def __neg__(self) -> Tensor:
        return neg(self)

    def __pow__(self, exponent: float) -> Tensor:
        return power(self, exponent)

    def __matmul__(self, other: Any) -> Tensor:
        return matmul(self, other)

    def __getitem__(self, index: Any) -> Tensor:
        return getitem(self, index)

    def sum(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        return sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        return mean(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape: int) -> Tensor:
        return reshape(self, shape[0] if len(shape) == 1 and isinstance(shape[0], tuple) else shape)

    def swapaxes(self, axis1: int, axis2: int) -> Tensor:
        return swapaxes(self, axis1, axis2)

    def tanh(self) -> Tensor:
        return tanh(self)

    def sigmoid(self) -> Tensor:
        return sigmoid(self)

    def exp(self) -> Tensor:
        return exp(self)

    def log(self) -> Tensor:
        return log(self)


class Parameter(Tensor):
    """
    A named model weight. `trainable=False` freezes it (no gradient is recorded).

    Names are dotted paths such as `encoder.layers.0.attention.w_q`; a model
    guarantees they are unique.
    """

    __slots__ = ("name", "trainable")

    def __init__(self, data: Any, name: str, trainable: bool = True):
        super().__init__(data, requires_grad=trainable)
        self.name = name
        self.trainable = trainable

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.shape}, trainable={self.trainable})"


# ───────────────────────────────────────────────────────────
# Helpers
# ───────────────────────────────────────────────────────────

def as_tensor(value: Any) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _broadcast_shape(primitive: str, a: Tensor, b: Tensor) -> tuple[int, ...]:
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError as e:
        raise ConfigurationError(
            f"{primitive}: shapes {list(a.shape)} and {list(b.shape)} do not broadcast"
        ) from e


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sums a broadcast gradient back down to `shape`."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


def _expand_reduced(grad: np.ndarray, shape: tuple[int, ...], axis: Any, keepdims: bool) -> np.ndarray:
    if axis is None:
        return np.broadcast_to(grad.reshape((1,) * len(shape)), shape)
    axes = (axis,) if isinstance(axis, int) else tuple(axis)
    axes = tuple(a % len(shape) for a in axes)
    if not keepdims:
        for a in sorted(axes):
            grad = np.expand_dims(grad, a)
    return np.broadcast_to(grad, shape)


# ───────────────────────────────────────────────────────────
# Elementwise arithmetic
# ───────────────────────────────────────────────────────────

def add(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("add", a, b)

    def backward(g: np.ndarray):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return Tensor._from_op(a.data + b.data, (a, b), "add", backward)


def sub(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("sub", a, b)

    def backward(g: np.ndarray):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return Tensor._from_op(a.data - b.data, (a, b), "sub", backward)


def mul(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("mul", a, b)

    def backward(g: np.ndarray):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return Tensor._from_op(a.data * b.data, (a, b), "mul", backward)


def div(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("div", a, b)

    def backward(g: np.ndarray):
        return (
            _unbroadcast(g / b.data, a.shape),
            _unbroadcast(-g * a.data / (b.data * b.data), b.shape),
        )

    return Tensor._from_op(a.data / b.data, (a, b), "div", backward)


def neg(a: Any) -> Tensor:
    a = as_tensor(a)
    return Tensor._from_op(-a.data, (a,), "neg", lambda g: (-g,))


def power(a: Any, exponent: float) -> Tensor:
    a = as_tensor(a)
    p = float(exponent)

    def backward(g: np.ndarray):
        return (g * p * a.data ** (p - 1.0),)

    return Tensor._from_op(a.data ** p, (a,), f"pow{p:g}", backward)


def clip(a: Any, low: float, high: float) -> Tensor:
    """Clamps values into [low, high]; gradient passes only inside the interval."""
    a = as_tensor(a)

    def backward(g: np.ndarray):
        inside = (a.data >= low) & (a.data <= high)
        return (g * inside,)

    return Tensor._from_op(np.clip(a.data, low, high), (a,), "clip", backward)


# ───────────────────────────────────────────────────────────
# Nonlinearities
# ───────────────────────────────────────────────────────────

def tanh(a: Any) -> Tensor:
    a = as_tensor(a)
    y = np.tanh(a.data)
    return Tensor._from_op(y, (a,), "tanh", lambda g: (g * (1.0 - y * y),))


def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    z = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + z), z / (1.0 + z))


def sigmoid(a: Any) -> Tensor:
    a = as_tensor(a)
    y = _stable_sigmoid(a.data)
    return Tensor._from_op(y, (a,), "sigmoid", lambda g: (g * y * (1.0 - y),))


def exp(a: Any) -> Tensor:
    a = as_tensor(a)
    y = np.exp(a.data)
    return Tensor._from_op(y, (a,), "exp", lambda g: (g * y,))


def log(a: Any) -> Tensor:
    a = as_tensor(a)
    return Tensor._from_op(np.log(a.data), (a,), "log", lambda g: (g / a.data,))


_GELU_C = float(np.sqrt(2.0 / np.pi))
_GELU_K = 0.044715


def gelu(a: Any) -> Tensor:
    """GELU, tanh approximation."""
    a = as_tensor(a)
    x = a.data
    t = np.tanh(_GELU_C * (x + _GELU_K * x ** 3))
    y = 0.5 * x * (1.0 + t)

    def backward(g: np.ndarray):
        dt = (1.0 - t * t) * _GELU_C * (1.0 + 3.0 * _GELU_K * x * x)
        return (g * (0.5 * (1.0 + t) + 0.5 * x * dt),)

    return Tensor._from_op(y, (a,), "gelu", backward)


def softmax(a: Any, mask: np.ndarray | None = None, axis: int = -1) -> Tensor:
    """
    Softmax along `axis` of `a + mask`.

    `mask` is a constant additive array (0 for visible positions, a large
    negative value for hidden ones) that must broadcast to `a.shape`.
    """
    a = as_tensor(a)
    z = a.data
    if mask is not None:
        mask = np.asarray(mask, dtype=DTYPE)
        try:
            target = np.broadcast_shapes(a.shape, mask.shape)
        except ValueError as e:
            raise ConfigurationError(
                f"softmax: shapes {list(a.shape)} and {list(mask.shape)} do not broadcast"
            ) from e
        if target != a.shape:
            raise ConfigurationError(
                f"softmax: mask shape {list(mask.shape)} widens input shape {list(a.shape)}"
            )
        z = z + mask
    e = np.exp(z - z.max(axis=axis, keepdims=True))
    s = e / e.sum(axis=axis, keepdims=True)

    def backward(g: np.ndarray):
        return (s * (g - (g * s).sum(axis=axis, keepdims=True)),)

    return Tensor._from_op(s, (a,), "softmax", backward)


# ───────────────────────────────────────────────────────────
# Linear algebra and shape manipulation
# ───────────────────────────────────────────────────────────

def matmul(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ConfigurationError(f"matmul: shapes {list(a.shape)} and {list(b.shape)} do not conform")
    try:
        np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    except ValueError as e:
        raise ConfigurationError(
            f"matmul: batch dimensions of {list(a.shape)} and {list(b.shape)} do not broadcast"
        ) from e

    def backward(g: np.ndarray):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2))
        gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return Tensor._from_op(np.matmul(a.data, b.data), (a, b), "matmul", backward)


def reshape(a: Any, shape: tuple[int, ...]) -> Tensor:
    a = as_tensor(a)
    try:
        data = a.data.reshape(shape)
    except ValueError as e:
        raise ConfigurationError(f"reshape: cannot view {list(a.shape)} as {list(shape)}") from e
    return Tensor._from_op(data, (a,), "reshape", lambda g: (g.reshape(a.shape),))


def swapaxes(a: Any, axis1: int, axis2: int) -> Tensor:
    a = as_tensor(a)
    return Tensor._from_op(
        np.swapaxes(a.data, axis1, axis2), (a,), "swapaxes", lambda g: (np.swapaxes(g, axis1, axis2),)
    )


def getitem(a: Any, index: Any) -> Tensor:
    """Slices `a` (basic or integer-array indexing); the gradient scatters back."""
    a = as_tensor(a)

    def backward(g: np.ndarray):
        full = np.zeros_like(a.data)
        np.add.at(full, index, g)
        return (full,)

    return Tensor._from_op(a.data[index], (a,), "getitem", backward)


def embedding(weight: Any, ids: np.ndarray) -> Tensor:
    """Gathers rows of `weight` for integer `ids`; result shape is `ids.shape + (width,)`."""
    weight = as_tensor(weight)
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= weight.shape[0]):
        raise ConfigurationError(
            f"embedding: ids outside [0, {weight.shape[0]}) for table of shape {list(weight.shape)}"
        )

    def backward(g: np.ndarray):
        full = np.zeros_like(weight.data)
        np.add.at(full, ids, g)
        return (full,)

    return Tensor._from_op(weight.data[ids], (weight,), "embedding", backward)


def concat(tensors: Sequence[Any], axis: int = -1) -> Tensor:
    parts = tuple(as_tensor(t) for t in tensors)
    try:
        data = np.concatenate([p.data for p in parts], axis=axis)
    except ValueError as e:
        raise ConfigurationError(
            f"concat: shapes {[list(p.shape) for p in parts]} do not align on axis {axis}"
        ) from e
    bounds = np.cumsum([p.shape[axis] for p in parts])[:-1]

    def backward(g: np.ndarray):
        return tuple(np.split(g, bounds, axis=axis))

    return Tensor._from_op(data, parts, "concat", backward)


def stack(tensors: Sequence[Any], axis: int = 0) -> Tensor:
    parts = tuple(as_tensor(t) for t in tensors)
    try:
        data = np.stack([p.data for p in parts], axis=axis)
    except ValueError as e:
        raise ConfigurationError(f"stack: shapes {[list(p.shape) for p in parts]} differ") from e

    def backward(g: np.ndarray):
        return tuple(np.moveaxis(g, axis, 0))

    return Tensor._from_op(data, parts, "stack", backward)


# ───────────────────────────────────────────────────────────
# Reductions
# ───────────────────────────────────────────────────────────

def sum_(a: Any, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)

    def backward(g: np.ndarray):
        return (_expand_reduced(g, a.shape, axis, keepdims),)

    return Tensor._from_op(a.data.sum(axis=axis, keepdims=keepdims), (a,), "sum", backward)


def mean(a: Any, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    out = a.data.mean(axis=axis, keepdims=keepdims)
    count = a.data.size // max(np.asarray(out).size, 1)

    def backward(g: np.ndarray):
        return (_expand_reduced(g, a.shape, axis, keepdims) / count,)

    return Tensor._from_op(out, (a,), "mean", backward)
