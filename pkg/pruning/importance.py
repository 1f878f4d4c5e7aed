# pruning/importance.py

"""
importance.py – Gradient-Based Head Importance

Scores every attention head by the expected absolute gradient of the loss with
respect to its output (the per-head context tensor before the output
projection). A head whose output the loss does not depend on scores exactly 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from config import TaskSpec
from model import FigurativeClassifier, bce_loss
from utils.corpus import EncodedSplit
from utils.errors import ConfigurationError, ScoringError, UsageError

logger = logging.getLogger(__name__)


@dataclass
class ImportanceGrid:
    """
    L x H importance scores.

    Attributes:
        scores (np.ndarray): Non-negative float64 array, shape (n_layers, n_heads).
        n_examples (int): Number of examples the scores average over.
        task (TaskSpec): Task whose loss was differentiated.
        source_split (str): Split the examples came from.
        reduction (str): "mean" or "sum" over each head's output elements.
    """
    scores: np.ndarray
    n_examples: int
    task: TaskSpec = field(default_factory=TaskSpec)
    source_split: str = "train"
    reduction: str = "mean"

    def __post_init__(self) -> None:
        self.scores = np.array(self.scores, dtype=np.float64)
        if self.scores.ndim != 2 or self.scores.size == 0:
            raise ConfigurationError(f"importance grid must be a non-empty 2-D array, got {list(self.scores.shape)}")
        if np.isnan(self.scores).any() or (self.scores < 0).any():
            raise ConfigurationError("importance scores must be non-negative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.scores.shape

    def zero_count(self, epsilon: float = 0.0) -> int:
        return int((self.scores <= epsilon).sum())


def score_heads(
    model: FigurativeClassifier,
    data: EncodedSplit,
    task: TaskSpec,
    source_split: str = "train",
    reduction: str = "mean",
    batch_size: int = 16,
) -> ImportanceGrid:
    """
    Averages per-example head sensitivities over `data`.

    For each example the score of head h in layer l is mean(|dL/dh|) over the
    head's output elements at real (non-pad) positions, or their sum when
    `reduction` is "sum". Examples are processed in order, batched; the batch
    loss is the sum of per-example losses, so each example's gradient equals
    the gradient of its own loss. No parameter is modified.

    Raises:
        UsageError: If `data` is empty or `reduction` is unknown.
        ScoringError: If a head gradient is not finite; names the example.
    """
    if len(data) == 0:
        raise UsageError("cannot score heads on an empty dataset")
    if reduction not in ("mean", "sum"):
        raise UsageError(f"unknown reduction {reduction!r}; expected 'mean' or 'sum'")

    config = model.config
    totals = np.zeros((config.n_layers, config.n_heads), dtype=np.float64)
    model.eval()
    model.zero_grad()
    for start in range(0, len(data), batch_size):
        batch = data.batch(np.arange(start, min(start + batch_size, len(data))))
        output = model(batch.ids, batch.pad_mask, retain_head_outputs=True)
        bce_loss(output.probabilities, batch.labels, reduction="sum").backward()

        real = output.pad_mask.astype(np.float64)[:, None, :, None]
        denominator = output.pad_mask.sum(axis=1)[:, None] * config.d_head
        for layer, head_output in enumerate(output.head_outputs):
            grad = head_output.grad
            finite = np.isfinite(grad).all(axis=(1, 2, 3))
            if not finite.all():
                bad = batch.record_ids[int(np.argmin(finite))]
                raise ScoringError(f"non-finite head gradient in layer {layer} for example {bad!r}")
            per_example = (np.abs(grad) * real).sum(axis=(2, 3))
            if reduction == "mean":
                per_example = per_example / denominator
            totals[layer] += per_example.sum(axis=0)
        model.zero_grad()

    grid = ImportanceGrid(
        scores=totals / len(data),
        n_examples=len(data),
        task=task,
        source_split=source_split,
        reduction=reduction,
    )
    logger.info(
        f"Scored {grid.scores.size} heads on {len(data)} {source_split} examples; "
        f"{grid.zero_count()} scored exactly 0"
    )
    return grid


@dataclass(frozen=True)
class LayerProfile:
    layer: int
    mean: float
    max: float
    top_head: int
    zero_heads: int


def layer_profile(grid: ImportanceGrid, epsilon: float = 0.0) -> list[LayerProfile]:
    """Per-layer mean and max score, the strongest head and the count of heads <= epsilon."""
    return [
        LayerProfile(
            layer=layer,
            mean=float(row.mean()),
            max=float(row.max()),
            top_head=int(np.argmax(row)),
            zero_heads=int((row <= epsilon).sum()),
        )
        for layer, row in enumerate(grid.scores)
    ]
