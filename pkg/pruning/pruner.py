# pruning/pruner.py

"""
pruner.py – Post-Hoc Head Pruning

Gates off every head whose importance is at or below a cutoff. Pruning only
changes the head mask: encoder, BiLSTM and classifier weights stay untouched,
and heads that were already gated off stay off.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from config import TaskSpec
from model import FigurativeClassifier, HeadMask
from utils.corpus import EncodedSplit
from utils.errors import ConfigurationError, UsageError
from training import evaluate
from .importance import ImportanceGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PruneReport:
    threshold: float
    epsilon: float
    pruned_heads: tuple[tuple[int, int], ...]
    retained_count: int
    total_count: int

    def __post_init__(self) -> None:
        if self.retained_count + len(self.pruned_heads) != self.total_count:
            raise ConfigurationError(
                f"prune accounting broken: {self.retained_count} retained + "
                f"{len(self.pruned_heads)} pruned != {self.total_count}"
            )

    @property
    def pruned_count(self) -> int:
        return len(self.pruned_heads)

    def to_dict(self) -> dict[str, Any]:
        return {
            "threshold": self.threshold,
            "epsilon": self.epsilon,
            "pruned_heads": [list(h) for h in self.pruned_heads],
            "retained_count": self.retained_count,
            "pruned_count": self.pruned_count,
            "total_count": self.total_count,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PruneReport:
        return cls(
            threshold=float(data["threshold"]),
            epsilon=float(data["epsilon"]),
            pruned_heads=tuple((int(l), int(h)) for l, h in data["pruned_heads"]),
            retained_count=int(data["retained_count"]),
            total_count=int(data["total_count"]),
        )


def prune_mask(current: HeadMask, grid: ImportanceGrid, threshold: float, epsilon: float = 0.0) -> HeadMask:
    """
    Gates of `current` with every head scoring <= max(threshold, epsilon) turned off.

    Raises:
        UsageError: If threshold or epsilon is negative.
        ConfigurationError: If the grid and mask dimensions differ.
    """
    if threshold < 0:
        raise UsageError(f"prune threshold must be non-negative, got {threshold}")
    if epsilon < 0:
        raise UsageError(f"prune epsilon must be non-negative, got {epsilon}")
    if grid.shape != current.gates.shape:
        raise ConfigurationError(
            f"importance grid {list(grid.shape)} does not match head mask {list(current.gates.shape)}"
        )
    cutoff = max(threshold, epsilon)
    keep = (grid.scores > cutoff).astype(np.float64)
    return HeadMask(current.gates * keep)


def prune(
    model: FigurativeClassifier, grid: ImportanceGrid, threshold: float = 0.0, epsilon: float = 0.0
) -> tuple[FigurativeClassifier, PruneReport]:
    """
    Returns a pruned copy of `model` and the accounting of the prune.

    Raises:
        UsageError: If threshold or epsilon is negative.
        ConfigurationError: If the grid does not match the model's heads.
    """
    mask = prune_mask(model.head_mask, grid, threshold, epsilon)
    pruned = model.with_head_mask(mask)
    report = PruneReport(
        threshold=float(threshold),
        epsilon=float(epsilon),
        pruned_heads=tuple(mask.pruned_heads()),
        retained_count=mask.retained_count,
        total_count=mask.total_count,
    )
    logger.info(f"{report.pruned_count} heads pruned, {report.retained_count} of {report.total_count} retained")
    return pruned, report


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    retained: int
    pruned: int
    accuracy: float
    f1: float
    macro_precision: float
    macro_recall: float


def sweep_thresholds(
    model: FigurativeClassifier,
    grid: ImportanceGrid,
    thresholds: Sequence[float],
    data: EncodedSplit,
    task: TaskSpec,
    epsilon: float = 0.0,
    batch_size: int = 16,
) -> list[SweepRow]:
    """Prunes at each threshold (ascending) and evaluates the result on `data`."""
    rows: list[SweepRow] = []
    for threshold in sorted(set(float(t) for t in thresholds)):
        pruned, report = prune(model, grid, threshold, epsilon)
        evaluation = evaluate(pruned, data, task, batch_size)
        rows.append(SweepRow(
            threshold=threshold,
            retained=report.retained_count,
            pruned=report.pruned_count,
            accuracy=evaluation.accuracy,
            f1=evaluation.f1,
            macro_precision=evaluation.macro_precision,
            macro_recall=evaluation.macro_recall,
        ))
    return rows
