# training/optimizer.py

"""
optimizer.py – AdamW

Adaptive-moment optimizer with decoupled weight decay: the decay term is
applied to the weights directly and never enters the moment estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from config import TrainConfig
from utils.autodiff import Parameter
from utils.errors import TrainingError, UsageError


@dataclass
class AdamWState:
    """Step counter and per-parameter first/second moment buffers."""
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def adamw_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: AdamWState,
    config: TrainConfig,
) -> tuple[dict[str, np.ndarray], AdamWState]:
    """
    One AdamW update.

        m <- b1 m + (1 - b1) g
        v <- b2 v + (1 - b2) g^2
        w <- w - lr * (m_hat / (sqrt(v_hat) + eps) + wd * w)

    with m_hat = m / (1 - b1^t) and v_hat = v / (1 - b2^t).

    Returns:
        tuple: New parameter arrays and the new state; inputs are not modified.

    Raises:
        TrainingError: If a gradient contains NaN or inf; names the parameter.
        UsageError: If a moment buffer's shape does not match its parameter.
    """
    for name, grad in grads.items():
        if not np.all(np.isfinite(grad)):
            raise TrainingError(f"non-finite gradient for parameter {name!r}")

    t = state.step + 1
    b1, b2 = config.beta1, config.beta2
    new_params: dict[str, np.ndarray] = {}
    new_state = AdamWState(step=t)
    for name, w in params.items():
        g = grads.get(name)
        if g is None:
            g = np.zeros_like(w)
        m = state.m.get(name, np.zeros_like(w))
        v = state.v.get(name, np.zeros_like(w))
        if m.shape != w.shape or v.shape != w.shape:
            raise UsageError(f"moment buffers of {name!r} have shape {list(m.shape)}, parameter {list(w.shape)}")
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * (g * g)
        m_hat = m / (1.0 - b1 ** t)
        v_hat = v / (1.0 - b2 ** t)
        new_params[name] = w - config.learning_rate * (m_hat / (np.sqrt(v_hat) + config.epsilon) + config.weight_decay * w)
        new_state.m[name] = m
        new_state.v[name] = v
    return new_params, new_state


class AdamW:
    """Applies `adamw_step` to a model's trainable parameters in place."""

    def __init__(self, parameters: list[Parameter], config: TrainConfig):
        self.parameters = [p for p in parameters if p.trainable]
        self.config = config
        self.state = AdamWState()

    def step(self) -> None:
        params = {p.name: p.data for p in self.parameters}
        grads = {p.name: p.grad for p in self.parameters if p.grad is not None}
        updated, self.state = adamw_step(params, grads, self.state, self.config)
        for p in self.parameters:
            p.data = updated[p.name]

    def zero_grad(self) -> None:
        for p in self.parameters:
            p.grad = None
