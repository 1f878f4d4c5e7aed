# training/trainer.py

"""
trainer.py – Fine-Tuning Loop with Early Stopping

Mini-batch training of the figurative-language classifier with AdamW. After
every epoch the mean validation loss is measured; training stops once
`patience` consecutive epochs fail to improve on the best value by more than
1e-8, and the weights of the best epoch are returned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from config import DECISION_THRESHOLD, IMPROVEMENT_TOLERANCE, TaskSpec, TrainConfig
from model import FigurativeClassifier, bce_loss
from utils.autodiff import no_grad
from utils.corpus import EncodedSplit
from utils.errors import TrainingError, UsageError
from utils.metrics import EvalReport, confusion, metrics
from utils.tokenizer import Vocabulary
from .checkpoint import Checkpoint, CheckpointMetadata
from .optimizer import AdamW

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_accuracy: float


@dataclass
class TrainResult:
    """Best-epoch weights plus the per-epoch history."""
    best_epoch: int
    best_val_loss: float
    best_state: dict[str, np.ndarray]
    max_epochs: int
    history: list[EpochRecord] = field(default_factory=list)

    @property
    def stopped_early(self) -> bool:
        return bool(self.history) and self.history[-1].epoch < self.max_epochs


class EarlyStopping:
    """
    Tracks the best validation loss and the run of non-improving epochs.

    An epoch improves when its loss is below `best - tolerance`.
    """

    def __init__(self, patience: int, tolerance: float = IMPROVEMENT_TOLERANCE):
        self.patience = patience
        self.tolerance = tolerance
        self.best = math.inf
        self.best_epoch = 0
        self.bad_epochs = 0

    def update(self, epoch: int, loss: float) -> bool:
        """Records one epoch; returns True when it is the new best."""
        if loss < self.best - self.tolerance:
            self.best = loss
            self.best_epoch = epoch
            self.bad_epochs = 0
            return True
        self.bad_epochs += 1
        return False

    @property
    def should_stop(self) -> bool:
        return self.bad_epochs >= self.patience


def predict_probabilities(model: FigurativeClassifier, data: EncodedSplit, batch_size: int = 16) -> np.ndarray:
    """Probabilities for every example, in order, without recording a graph."""
    model.eval()
    out = np.empty(len(data), dtype=np.float64)
    with no_grad():
        for start in range(0, len(data), batch_size):
            index = np.arange(start, min(start + batch_size, len(data)))
            batch = data.batch(index)
            out[index] = model(batch.ids, batch.pad_mask).probabilities.data
    return out


def mean_loss(model: FigurativeClassifier, data: EncodedSplit, batch_size: int = 16) -> tuple[float, float]:
    """Mean BCE and accuracy over a split, without recording a graph."""
    if len(data) == 0:
        raise UsageError("cannot measure loss on an empty split")
    model.eval()
    total = 0.0
    correct = 0
    with no_grad():
        for start in range(0, len(data), batch_size):
            batch = data.batch(np.arange(start, min(start + batch_size, len(data))))
            output = model(batch.ids, batch.pad_mask)
            total += bce_loss(output.probabilities, batch.labels, reduction="sum").item()
            correct += int((output.predictions == batch.labels).sum())
    return total / len(data), correct / len(data)


def evaluate(model: FigurativeClassifier, data: EncodedSplit, task: TaskSpec, batch_size: int = 16) -> EvalReport:
    """Confusion counts and every metric of `model` on `data`."""
    probabilities = predict_probabilities(model, data, batch_size)
    predictions = (probabilities >= DECISION_THRESHOLD).astype(np.int64)
    return metrics(confusion(predictions, data.labels), task)


class Trainer:
    """
    Runs the training loop for one model.

    Args:
        model (FigurativeClassifier): Model to train in place.
        config (TrainConfig): Optimizer, batching and early-stopping settings.
    """

    def __init__(self, model: FigurativeClassifier, config: TrainConfig):
        self.model = model
        self.config = config
        self.optimizer = AdamW(model.parameters(), config)
        self.order_rng = np.random.default_rng(config.seed)

    def run_epoch(self, epoch: int, data: EncodedSplit) -> float:
        """
        One pass over `data` in a freshly shuffled order.

        Returns:
            float: Example-weighted mean training loss.

        Raises:
            TrainingError: If a batch loss is not finite.
        """
        self.model.train(True, rng=np.random.default_rng([self.config.seed, epoch]))
        order = self.order_rng.permutation(len(data))
        total = 0.0
        for start in range(0, len(data), self.config.batch_size):
            batch = data.batch(order[start:start + self.config.batch_size])
            self.optimizer.zero_grad()
            output = self.model(batch.ids, batch.pad_mask)
            loss = bce_loss(output.probabilities, batch.labels)
            value = loss.item()
            if not math.isfinite(value):
                raise TrainingError(f"non-finite training loss in epoch {epoch}")
            loss.backward()
            self.optimizer.step()
            total += value * len(batch)
        self.model.eval()
        return total / len(data)

    def validate(self, epoch: int, data: EncodedSplit) -> tuple[float, float]:
        """Mean validation loss and accuracy after `epoch`."""
        loss, accuracy = mean_loss(self.model, data, self.config.batch_size)
        if not math.isfinite(loss):
            raise TrainingError(f"non-finite validation loss in epoch {epoch}")
        return loss, accuracy

    def fit(self, train: EncodedSplit, validation: EncodedSplit) -> TrainResult:
        """
        Trains for at most `max_epochs`, stopping early on a validation plateau.

        The model is left holding the weights of the best epoch.

        Raises:
            UsageError: If either split is empty.
            TrainingError: If the loss diverges.
        """
        if len(train) == 0 or len(validation) == 0:
            raise UsageError(f"training needs non-empty splits (train={len(train)}, validation={len(validation)})")
        stopper = EarlyStopping(self.config.patience)
        best_state = self.model.state_dict()
        history: list[EpochRecord] = []
        for epoch in range(1, self.config.max_epochs + 1):
            train_loss = self.run_epoch(epoch, train)
            val_loss, val_accuracy = self.validate(epoch, validation)
            history.append(EpochRecord(epoch, train_loss, val_loss, val_accuracy))
            improved = stopper.update(epoch, val_loss)
            if improved:
                best_state = self.model.state_dict()
            logger.info(
                f"epoch {epoch:>3}: train_loss={train_loss:.4f} val_loss={val_loss:.4f} "
                f"val_acc={val_accuracy:.3f}{' *' if improved else ''}"
            )
            if stopper.should_stop:
                logger.info(f"Early stopping after epoch {epoch}; best epoch {stopper.best_epoch}")
                break
        self.model.load_state_dict(best_state)
        return TrainResult(
            best_epoch=stopper.best_epoch,
            best_val_loss=stopper.best,
            best_state=best_state,
            max_epochs=self.config.max_epochs,
            history=history,
        )


def train(
    model: FigurativeClassifier,
    train_split: EncodedSplit,
    validation_split: EncodedSplit,
    config: TrainConfig,
    vocab: Vocabulary,
    task: TaskSpec,
    corpus_fingerprint: str = "",
) -> tuple[Checkpoint, list[EpochRecord]]:
    """
    Fits `model` and packages the best epoch as a checkpoint.

    Returns:
        tuple[Checkpoint, list[EpochRecord]]: Best-epoch checkpoint and the history.
    """
    result = Trainer(model, config).fit(train_split, validation_split)
    metadata = CheckpointMetadata(
        epoch=result.best_epoch,
        val_loss=result.best_val_loss,
        corpus_fingerprint=corpus_fingerprint,
        seed=model.seed,
    )
    return Checkpoint.from_model(model, config, vocab, task, metadata), result.history
