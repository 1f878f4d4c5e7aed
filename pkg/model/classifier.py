# model/classifier.py

"""
classifier.py – Encoder + BiLSTM Figurative-Language Classifier

Puts the encoder, the bidirectional LSTM and a sigmoid-activated linear layer
together into one model, and defines the binary cross-entropy loss it is trained
and scored with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from config import BCE_CLAMP, DECISION_THRESHOLD, ModelConfig
from utils.autodiff import Tensor, as_tensor, clip, log
from utils.errors import ConfigurationError, UsageError
from utils.validation import validate_model_config

from .attention import Encoder, HeadMask
from .layers import Linear, Module
from .lstm import BiLSTM


@dataclass
class ModelOutput:
    """
    Result of one forward pass.

    Attributes:
        logits (Tensor): (batch,) pre-sigmoid scores.
        probabilities (Tensor): (batch,) sigmoid(logits), each in (0, 1).
        head_outputs (list[Tensor]): One (batch, n_heads, seq, d_head) tensor per layer.
        attention_weights (list[np.ndarray]): One (batch, n_heads, seq, seq) array per layer.
        pad_mask (np.ndarray): (batch, seq) real-token mask after trimming.
    """
    logits: Tensor
    probabilities: Tensor
    head_outputs: list[Tensor] = field(default_factory=list)
    attention_weights: list[np.ndarray] = field(default_factory=list)
    pad_mask: np.ndarray | None = None

    @property
    def predictions(self) -> np.ndarray:
        """1 where probability >= 0.5, else 0."""
        return (self.probabilities.data >= DECISION_THRESHOLD).astype(np.int64)


class FigurativeClassifier(Module):
    """
    Transformer encoder -> two-layer BiLSTM -> linear + sigmoid.

    Args:
        config (ModelConfig): Architecture; `vocab_size` is the actual vocabulary length.
        seed (int): Seed of the weight initialisation.
        head_mask (HeadMask | None): Initial gates; all heads on when omitted.
    """

    def __init__(self, config: ModelConfig, seed: int = 0, head_mask: HeadMask | None = None):
        super().__init__()
        validate_model_config(config)
        rng = np.random.default_rng(seed)
        self.config = config
        self.seed = seed
        self.encoder = self.add_module("encoder", Encoder(config, rng))
        self.bilstm = self.add_module(
            "bilstm", BiLSTM(config.d_model, config.lstm_hidden, config.lstm_layers, rng)
        )
        self.output = self.add_module("output", Linear(2 * config.lstm_hidden, 1, rng))
        self.assign_names()
        self.head_mask = head_mask.copy() if head_mask is not None else HeadMask.all_on(config.n_layers, config.n_heads)
        self.head_mask.check_dims(config.n_layers, config.n_heads)

    def classify(self, features: Tensor) -> tuple[Tensor, Tensor]:
        """logit = w . features + b, probability = sigmoid(logit)."""
        if features.shape[-1] != 2 * self.config.lstm_hidden:
            raise ConfigurationError(
                f"classifier expects {2 * self.config.lstm_hidden} features, got {features.shape[-1]}"
            )
        logits = self.output(features).reshape(features.shape[0])
        return logits, logits.sigmoid()

    def forward(
        self,
        ids: np.ndarray,
        pad_mask: np.ndarray,
        retain_head_outputs: bool = False,
        head_deltas: dict[int, np.ndarray] | None = None,
    ) -> ModelOutput:
        """
        Full forward pass over a padded batch.

        The batch is first trimmed to its longest real sequence; the trimmed
        columns are padding for every example, so the result is unchanged.
        """
        ids = np.asarray(ids, dtype=np.int64)
        pad_mask = np.asarray(pad_mask, dtype=bool)
        if ids.ndim == 1:
            ids, pad_mask = ids[None, :], pad_mask[None, :]
        real = np.nonzero(pad_mask.any(axis=0))[0]
        width = int(real[-1]) + 1 if real.size else ids.shape[1]
        ids, pad_mask = ids[:, :width], pad_mask[:, :width]

        encoded = self.encoder(ids, pad_mask, self.head_mask, head_deltas, retain_head_outputs)
        features = self.bilstm(encoded.hidden, pad_mask)
        logits, probabilities = self.classify(features)
        return ModelOutput(
            logits=logits,
            probabilities=probabilities,
            head_outputs=encoded.head_outputs,
            attention_weights=encoded.attention_weights,
            pad_mask=pad_mask,
        )

    __call__ = forward

    def with_head_mask(self, head_mask: HeadMask) -> FigurativeClassifier:
        """Copy of this model with identical weights and the given gates."""
        clone = FigurativeClassifier(self.config, self.seed, head_mask)
        clone.load_state_dict(self.state_dict())
        return clone


def bce_loss(probabilities: Tensor, labels: np.ndarray, reduction: str = "mean") -> Tensor:
    """
    Binary cross-entropy -[y ln p + (1 - y) ln(1 - p)].

    Probabilities are clipped to [1e-12, 1 - 1e-12] inside the loss only.

    Args:
        probabilities (Tensor): (batch,) sigmoid outputs.
        labels (np.ndarray): (batch,) of {0, 1}.
        reduction (str): "mean", "sum" or "none".
    """
    probabilities = as_tensor(probabilities)
    y = np.asarray(labels, dtype=np.float64).reshape(probabilities.shape)
    p = clip(probabilities, BCE_CLAMP, 1.0 - BCE_CLAMP)
    losses = -(log(p) * y + log(1.0 - p) * (1.0 - y))
    if reduction == "none":
        return losses
    if reduction == "sum":
        return losses.sum()
    if reduction == "mean":
        return losses.mean()
    raise UsageError(f"unknown reduction {reduction!r}; expected 'mean', 'sum' or 'none'")
