# utils/gradcheck.py

"""
gradcheck.py – Finite-Difference Gradient Checks

Compares analytic gradients from `Tensor.backward()` against central finite
differences. Used by the test-suite to check every primitive, the full model and
the head-importance scores.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .autodiff import Tensor, no_grad

FD_EPSILON: float = 1e-6


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """
    Norm-wise relative error ||a - n|| / max(||a||, ||n||).

    Two all-zero vectors compare as 0.0.
    """
    a = np.asarray(analytic, dtype=np.float64).ravel()
    n = np.asarray(numeric, dtype=np.float64).ravel()
    scale = max(np.linalg.norm(a), np.linalg.norm(n))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - n) / scale)


def numerical_gradient(
    loss_fn: Callable[[], Tensor],
    array: np.ndarray,
    indices: Sequence[tuple[int, ...]] | None = None,
    eps: float = FD_EPSILON,
) -> np.ndarray:
    """
    Central differences of `loss_fn()` with respect to entries of `array`.

    `array` is perturbed in place and restored after each probe. When `indices`
    is given only those entries are probed; the result then lists one value per
    index, in order.

    Returns:
        np.ndarray: Same shape as `array` (all entries) or `(len(indices),)`.
    """
    probe = list(np.ndindex(array.shape)) if indices is None else list(indices)
    values = np.empty(len(probe), dtype=np.float64)
    with no_grad():
        for k, idx in enumerate(probe):
            original = array[idx]
            array[idx] = original + eps
            plus = loss_fn().item()
            array[idx] = original - eps
            minus = loss_fn().item()
            array[idx] = original
            values[k] = (plus - minus) / (2.0 * eps)
    return values.reshape(array.shape) if indices is None else values


def check_gradients(
    loss_fn: Callable[[], Tensor],
    tensors: Sequence[Tensor],
    samples_per_tensor: int | None = None,
    seed: int = 0,
    eps: float = FD_EPSILON,
) -> float:
    """
    Worst relative error between analytic and numeric gradients over `tensors`.

    Args:
        loss_fn (Callable[[], Tensor]): Rebuilds the graph and returns a scalar loss.
        tensors (Sequence[Tensor]): Leaves requiring gradients to check.
        samples_per_tensor (int | None): Probe only this many random entries per
            tensor (all entries when None).
        seed (int): Seed for picking the probed entries.
        eps (float): Finite-difference step.

    Returns:
        float: Maximum relative error across tensors.
    """
    for t in tensors:
        t.grad = None
    loss_fn().backward()
    analytic = [np.zeros_like(t.data) if t.grad is None else t.grad.copy() for t in tensors]

    rng = np.random.default_rng(seed)
    worst = 0.0
    for t, grad in zip(tensors, analytic):
        if samples_per_tensor is None or samples_per_tensor >= t.data.size:
            numeric = numerical_gradient(loss_fn, t.data, eps=eps)
            worst = max(worst, relative_error(grad, numeric))
            continue
        flat = rng.choice(t.data.size, size=samples_per_tensor, replace=False)
        indices = [np.unravel_index(int(i), t.data.shape) for i in sorted(flat)]
        numeric = numerical_gradient(loss_fn, t.data, indices=indices, eps=eps)
        worst = max(worst, relative_error(np.array([grad[i] for i in indices]), numeric))
    return worst
