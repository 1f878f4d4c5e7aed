# model/attention.py

"""
attention.py – Multi-Head Self-Attention Encoder

Token + learned position embeddings followed by a stack of post-norm encoder
layers (self-attention, GELU feed-forward, residual + layer norm each).

Each layer exposes its per-head context tensors before the output projection
merges them. These tensors are the "head outputs" that importance scoring
differentiates against. Each head's context is multiplied by its `HeadMask` gate,
so a gate of 0 removes that head's contribution to the merged output exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from config import ATTENTION_MASK_VALUE, ModelConfig
from utils.autodiff import Tensor, embedding, gelu, softmax
from utils.errors import ConfigurationError, DataError

from .layers import LayerNorm, Linear, Module, dropout, uniform_init


@dataclass
class HeadMask:
    """
    L x H matrix of {0, 1} gates, one per attention head.

    Attributes:
        gates (np.ndarray): float64 array of shape (n_layers, n_heads).
    """
    gates: np.ndarray

    def __post_init__(self) -> None:
        self.gates = np.array(self.gates, dtype=np.float64)
        if self.gates.ndim != 2:
            raise ConfigurationError(f"head mask must be 2-D, got shape {list(self.gates.shape)}")
        if not np.isin(self.gates, (0.0, 1.0)).all():
            raise ConfigurationError("head mask gates must be 0 or 1")

    @classmethod
    def all_on(cls, n_layers: int, n_heads: int) -> HeadMask:
        return cls(np.ones((n_layers, n_heads)))

    @property
    def n_layers(self) -> int:
        return self.gates.shape[0]

    @property
    def n_heads(self) -> int:
        return self.gates.shape[1]

    @property
    def total_count(self) -> int:
        return int(self.gates.size)

    @property
    def retained_count(self) -> int:
        return int(self.gates.sum())

    def pruned_heads(self) -> list[tuple[int, int]]:
        """Gated-off heads as (layer, head), sorted."""
        return [(int(l), int(h)) for l, h in zip(*np.nonzero(self.gates == 0.0))]

    def check_dims(self, n_layers: int, n_heads: int) -> None:
        if self.gates.shape != (n_layers, n_heads):
            raise ConfigurationError(
                f"head mask shape {list(self.gates.shape)} does not match model ({n_layers}, {n_heads})"
            )

    def copy(self) -> HeadMask:
        return HeadMask(self.gates.copy())


@dataclass
class EncoderOutput:
    """Hidden states of the top layer plus everything exposed for analysis."""
    hidden: Tensor
    head_outputs: list[Tensor] = field(default_factory=list)
    attention_weights: list[np.ndarray] = field(default_factory=list)


class MultiHeadSelfAttention(Module):
    """
    Scaled dot-product self-attention with per-head projections.

    Projection weights are stored per head, shape (n_heads, d_model, d_head) for
    queries/keys/values and (n_heads, d_head, d_model) for the output projection,
    so a head's slice of the merge can be addressed as `w_o.data[h]`.
    """

    def __init__(self, d_model: int, n_heads: int, rng: np.random.Generator):
        super().__init__()
        if d_model % n_heads:
            raise ConfigurationError(f"d_model {d_model} is not divisible by n_heads {n_heads}")
        self.n_heads = n_heads
        self.d_head = d_model // n_heads
        shape_in = (n_heads, d_model, self.d_head)
        self.w_q = self.add_parameter("w_q", uniform_init(rng, shape_in, d_model))
        self.w_k = self.add_parameter("w_k", uniform_init(rng, shape_in, d_model))
        self.w_v = self.add_parameter("w_v", uniform_init(rng, shape_in, d_model))
        self.b_q = self.add_parameter("b_q", np.zeros((n_heads, 1, self.d_head)))
        self.b_k = self.add_parameter("b_k", np.zeros((n_heads, 1, self.d_head)))
        self.b_v = self.add_parameter("b_v", np.zeros((n_heads, 1, self.d_head)))
        self.w_o = self.add_parameter("w_o", uniform_init(rng, (n_heads, self.d_head, d_model), d_model))
        self.b_o = self.add_parameter("b_o", np.zeros(d_model))

    def __call__(
        self,
        x: Tensor,
        additive_mask: np.ndarray,
        gates: np.ndarray,
        head_delta: np.ndarray | None = None,
    ) -> tuple[Tensor, Tensor, np.ndarray]:
        """
        Args:
            x (Tensor): (batch, seq, d_model) input.
            additive_mask (np.ndarray): (batch, 1, 1, seq); 0 for real keys, -1e9 for pads.
            gates (np.ndarray): (n_heads,) gate per head.
            head_delta (np.ndarray | None): Optional constant added to the context
                tensor, shape (batch, n_heads, seq, d_head). Sensitivity probes use
                it to perturb head outputs directly.

        Returns:
            tuple: merged output (batch, seq, d_model), head context tensor
            (batch, n_heads, seq, d_head), attention weights (batch, n_heads, seq, seq).
        """
        batch, seq, width = x.shape
        x4 = x.reshape(batch, 1, seq, width)
        q = x4 @ self.w_q + self.b_q
        k = x4 @ self.w_k + self.b_k
        v = x4 @ self.w_v + self.b_v
        scores = (q @ k.swapaxes(-1, -2)) * (1.0 / np.sqrt(self.d_head))
        weights = softmax(scores, additive_mask)
        context = weights @ v
        if head_delta is not None:
            context = context + head_delta
        gated = context * gates.reshape(1, self.n_heads, 1, 1)
        merged = (gated @ self.w_o).sum(axis=1) + self.b_o
        return merged, context, weights.data


class EncoderLayer(Module):
    """Post-norm block: LN(x + Attn(x)), then LN(x + FFN(x))."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__()
        self.dropout_rate = config.dropout_rate
        self.attention = self.add_module("attention", MultiHeadSelfAttention(config.d_model, config.n_heads, rng))
        self.attention_norm = self.add_module("attention_norm", LayerNorm(config.d_model))
        self.ffn_in = self.add_module("ffn_in", Linear(config.d_model, config.d_ff, rng))
        self.ffn_out = self.add_module("ffn_out", Linear(config.d_ff, config.d_model, rng))
        self.ffn_norm = self.add_module("ffn_norm", LayerNorm(config.d_model))

    def __call__(
        self,
        x: Tensor,
        additive_mask: np.ndarray,
        gates: np.ndarray,
        head_delta: np.ndarray | None = None,
    ) -> tuple[Tensor, Tensor, np.ndarray]:
        attended, context, weights = self.attention(x, additive_mask, gates, head_delta)
        x = self.attention_norm(x + dropout(attended, self.dropout_rate, self))
        hidden = self.ffn_out(gelu(self.ffn_in(x)))
        x = self.ffn_norm(x + dropout(hidden, self.dropout_rate, self))
        return x, context, weights


class Encoder(Module):
    """Embeddings plus `n_layers` encoder layers."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__()
        self.config = config
        self.token_embedding = self.add_parameter(
            "token_embedding", uniform_init(rng, (config.vocab_size, config.d_model), config.d_model)
        )
        self.position_embedding = self.add_parameter(
            "position_embedding", uniform_init(rng, (config.max_len, config.d_model), config.d_model)
        )
        self.embedding_norm = self.add_module("embedding_norm", LayerNorm(config.d_model))
        self.layers: list[EncoderLayer] = [
            self.add_module(f"layers.{i}", EncoderLayer(config, rng)) for i in range(config.n_layers)
        ]

    def __call__(
        self,
        ids: np.ndarray,
        pad_mask: np.ndarray,
        head_mask: HeadMask,
        head_deltas: dict[int, np.ndarray] | None = None,
        retain_head_outputs: bool = False,
    ) -> EncoderOutput:
        """
        Encodes a padded batch.

        Args:
            ids (np.ndarray): (batch, seq) token ids, seq <= max_len.
            pad_mask (np.ndarray): (batch, seq) booleans, True on real tokens.
            head_mask (HeadMask): Gates applied to every head's context tensor.
            head_deltas (dict[int, np.ndarray] | None): Per-layer perturbation of
                the head context tensors, keyed by layer index.
            retain_head_outputs (bool): Keep gradients of the head context tensors.

        Raises:
            DataError: If an id is out of range or the sequence exceeds max_len.
        """
        ids = np.asarray(ids, dtype=np.int64)
        pad_mask = np.asarray(pad_mask, dtype=bool)
        if ids.ndim != 2 or ids.shape != pad_mask.shape:
            raise DataError(f"ids {list(ids.shape)} and pad mask {list(pad_mask.shape)} must be equal 2-D shapes")
        seq = ids.shape[1]
        if seq > self.config.max_len:
            raise DataError(f"sequence length {seq} exceeds max_len {self.config.max_len}")
        if ids.size and (ids.min() < 0 or ids.max() >= self.config.vocab_size):
            raise DataError(f"token id out of range [0, {self.config.vocab_size})")
        head_mask.check_dims(self.config.n_layers, self.config.n_heads)

        x = embedding(self.token_embedding, ids) + self.position_embedding[:seq]
        x = dropout(self.embedding_norm(x), self.config.dropout_rate, self)
        additive_mask = np.where(pad_mask, 0.0, ATTENTION_MASK_VALUE)[:, None, None, :]

        output = EncoderOutput(hidden=x)
        for index, layer in enumerate(self.layers):
            delta = None if head_deltas is None else head_deltas.get(index)
            x, context, weights = layer(x, additive_mask, head_mask.gates[index], delta)
            if retain_head_outputs:
                context.retain_grad()
            output.head_outputs.append(context)
            output.attention_weights.append(weights)
        output.hidden = x
        return output
