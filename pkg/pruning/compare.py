# pruning/compare.py

"""
compare.py – Original vs Pruned Evaluation

Evaluates two checkpoints of the same task and vocabulary on one identical
example sequence and reports both metric sets with per-metric deltas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from config import TaskSpec
from training import Checkpoint, evaluate
from utils.corpus import CorpusRecord, encode_split
from utils.errors import UsageError
from utils.metrics import EvalReport, metric_deltas


@dataclass(frozen=True)
class ComparisonReport:
    task: TaskSpec
    original: EvalReport
    pruned: EvalReport
    deltas: dict[str, float]
    original_retained: int
    pruned_retained: int
    total_heads: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "task": {"label_column": self.task.label_column, "positive_value": self.task.positive_value},
            "original": self.original.to_dict(),
            "pruned": self.pruned.to_dict(),
            "deltas": dict(self.deltas),
            "original_retained": self.original_retained,
            "pruned_retained": self.pruned_retained,
            "total_heads": self.total_heads,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ComparisonReport:
        return cls(
            task=TaskSpec(**data["task"]),
            original=EvalReport.from_dict(data["original"]),
            pruned=EvalReport.from_dict(data["pruned"]),
            deltas={k: float(v) for k, v in data["deltas"].items()},
            original_retained=int(data["original_retained"]),
            pruned_retained=int(data["pruned_retained"]),
            total_heads=int(data["total_heads"]),
        )


def compare(
    original: Checkpoint,
    pruned: Checkpoint,
    records: Sequence[CorpusRecord],
    task: TaskSpec,
    batch_size: int = 16,
) -> ComparisonReport:
    """
    Side-by-side metrics of two checkpoints on `records`.

    Raises:
        UsageError: If the checkpoints differ in vocabulary or task, or `records` is empty.
    """
    if original.vocab.fingerprint != pruned.vocab.fingerprint:
        raise UsageError("checkpoints were trained with different vocabularies")
    if original.task != pruned.task or original.task != task:
        raise UsageError(
            f"task mismatch: original {original.task.label_column!r}, pruned {pruned.task.label_column!r}, "
            f"requested {task.label_column!r}"
        )
    if not records:
        raise UsageError("cannot compare on an empty split")
    original_model, pruned_model = original.to_model(), pruned.to_model()
    data = encode_split(records, original.vocab, original.model_config.max_len, task)
    before = evaluate(original_model, data, task, batch_size)
    after = evaluate(pruned_model, data, task, batch_size)
    return ComparisonReport(
        task=task,
        original=before,
        pruned=after,
        deltas=metric_deltas(before, after),
        original_retained=original.head_mask.retained_count,
        pruned_retained=pruned.head_mask.retained_count,
        total_heads=original.head_mask.total_count,
    )
