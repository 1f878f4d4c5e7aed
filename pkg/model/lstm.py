# model/lstm.py

"""
lstm.py – Bidirectional LSTM

Stacked bidirectional LSTM over the encoder's hidden states. Padded steps do
not change the recurrent state: `h = h_new * m + h * (1 - m)` with m the real-token
mask, so the forward direction carries its last real state to the end of the
sequence and the backward direction starts from zeros at the last real token.

Gate layout along the 4*hidden axis is (input, forget, cell, output).
"""

from __future__ import annotations

import numpy as np

from utils.autodiff import Tensor, concat, sigmoid, stack, tanh
from utils.errors import DataError

from .layers import Module, uniform_init


class LSTMDirection(Module):
    """One direction of one layer: input weights, recurrent weights, bias."""

    def __init__(self, input_size: int, hidden: int, rng: np.random.Generator):
        super().__init__()
        self.hidden = hidden
        self.w_ih = self.add_parameter("w_ih", uniform_init(rng, (input_size, 4 * hidden), hidden))
        self.w_hh = self.add_parameter("w_hh", uniform_init(rng, (hidden, 4 * hidden), hidden))
        self.b = self.add_parameter("b", np.zeros(4 * hidden))

    def __call__(self, x: Tensor, mask: np.ndarray, reverse: bool = False) -> tuple[list[Tensor], Tensor]:
        """
        Runs the recurrence over (batch, seq, input_size).

        Returns:
            tuple: per-step hidden states in sequence order, and the state after
            the last processed step.
        """
        batch, seq, _ = x.shape
        n = self.hidden
        projected = x @ self.w_ih + self.b
        h = Tensor(np.zeros((batch, n)))
        c = Tensor(np.zeros((batch, n)))
        outputs: list[Tensor | None] = [None] * seq
        steps = range(seq - 1, -1, -1) if reverse else range(seq)
        for t in steps:
            gates = projected[:, t] + h @ self.w_hh
            i = sigmoid(gates[:, 0:n])
            f = sigmoid(gates[:, n:2 * n])
            g = tanh(gates[:, 2 * n:3 * n])
            o = sigmoid(gates[:, 3 * n:4 * n])
            c_new = f * c + i * g
            h_new = o * tanh(c_new)
            m = mask[:, t:t + 1].astype(np.float64)
            if m.all():
                h, c = h_new, c_new
            else:
                h = h_new * m + h * (1.0 - m)
                c = c_new * m + c * (1.0 - m)
            outputs[t] = h
        return outputs, h


class BiLSTM(Module):
    """`n_layers` bidirectional layers; each layer feeds [fwd; bwd] to the next."""

    def __init__(self, input_size: int, hidden: int, n_layers: int, rng: np.random.Generator):
        super().__init__()
        self.hidden = hidden
        self.directions: list[tuple[LSTMDirection, LSTMDirection]] = []
        width = input_size
        for layer in range(n_layers):
            forward = self.add_module(f"layers.{layer}.forward", LSTMDirection(width, hidden, rng))
            backward = self.add_module(f"layers.{layer}.backward", LSTMDirection(width, hidden, rng))
            self.directions.append((forward, backward))
            width = 2 * hidden

    def __call__(self, x: Tensor, pad_mask: np.ndarray) -> Tensor:
        """
        Args:
            x (Tensor): (batch, seq, input_size) hidden states.
            pad_mask (np.ndarray): (batch, seq) booleans, True on real tokens.

        Returns:
            Tensor: (batch, 2 * hidden) features: final forward state of the top
            layer concatenated with the top layer's backward state at position 0.

        Raises:
            DataError: On an empty sequence or an example without real tokens.
        """
        pad_mask = np.asarray(pad_mask, dtype=bool)
        if x.ndim != 3 or x.shape[1] == 0:
            raise DataError("BiLSTM needs a non-empty sequence")
        if not pad_mask.any(axis=1).all():
            raise DataError("every example needs at least one real token")

        for forward, backward in self.directions:
            fwd_steps, fwd_final = forward(x, pad_mask)
            bwd_steps, bwd_first = backward(x, pad_mask, reverse=True)
            x = concat([stack(fwd_steps, axis=1), stack(bwd_steps, axis=1)], axis=-1)
        return concat([fwd_final, bwd_first], axis=-1)
