# utils/metrics.py

"""
metrics.py – Confusion Counts and Classification Metrics

Positive-class precision, recall and F1, accuracy, and macro / support-weighted
averages of per-class precision and recall. A ratio with an empty denominator is
0.0 and its name is recorded in `EvalReport.undefined`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from config import REPORT_ROWS, TaskSpec
from .errors import UsageError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise UsageError(f"confusion counts must be non-negative, got {self}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    accuracy: float
    macro_precision: float
    macro_recall: float
    weighted_precision: float
    weighted_recall: float
    counts: ConfusionCounts
    task: TaskSpec = field(default_factory=TaskSpec)
    n: int = 0
    undefined: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["undefined"] = list(self.undefined)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EvalReport:
        return cls(
            **{attr: float(data[attr]) for _, attr in REPORT_ROWS},
            counts=ConfusionCounts(**data["counts"]),
            task=TaskSpec(**data["task"]),
            n=int(data["n"]),
            undefined=tuple(data.get("undefined", ())),
        )


def confusion(predictions: Sequence[int], gold: Sequence[int]) -> ConfusionCounts:
    """
    Counts the four outcomes, label 1 being the positive class.

    Raises:
        UsageError: On a length mismatch or empty input.
    """
    pred = np.asarray(predictions, dtype=np.int64).ravel()
    true = np.asarray(gold, dtype=np.int64).ravel()
    if pred.shape != true.shape:
        raise UsageError(f"predictions ({pred.size}) and gold labels ({true.size}) differ in length")
    if pred.size == 0:
        raise UsageError("cannot count an empty prediction set")
    tn, fp, fn, tp = confusion_matrix(true, pred, labels=[0, 1]).ravel()
    return ConfusionCounts(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))


def _ratio(num: int, den: int, name: str, undefined: list[str]) -> float:
    if den == 0:
        undefined.append(name)
        return 0.0
    return num / den


def metrics(counts: ConfusionCounts, task: TaskSpec | None = None) -> EvalReport:
    """
    Derives every reported metric from confusion counts.

    Raises:
        UsageError: If the counts are all zero.
    """
    total = counts.total
    if total == 0:
        raise UsageError("cannot compute metrics over zero examples")
    undefined: list[str] = []
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn

    precision = _ratio(tp, tp + fp, "precision", undefined)
    recall = _ratio(tp, tp + fn, "recall", undefined)
    neg_precision = _ratio(tn, tn + fn, "negative_precision", undefined)
    neg_recall = _ratio(tn, tn + fp, "negative_recall", undefined)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0

    pos_support, neg_support = tp + fn, tn + fp
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        accuracy=(tp + tn) / total,
        macro_precision=(precision + neg_precision) / 2,
        macro_recall=(recall + neg_recall) / 2,
        weighted_precision=(precision * pos_support + neg_precision * neg_support) / total,
        weighted_recall=(recall * pos_support + neg_recall * neg_support) / total,
        counts=counts,
        task=task or TaskSpec(),
        n=total,
        undefined=tuple(undefined),
    )


def metric_deltas(original: EvalReport, pruned: EvalReport) -> dict[str, float]:
    """pruned - original for each reported metric."""
    return {attr: getattr(pruned, attr) - getattr(original, attr) for _, attr in REPORT_ROWS}
