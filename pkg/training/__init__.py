# training/__init__.py

"""
Training loop, optimizer and checkpoint objects.
"""

from .checkpoint import Checkpoint, CheckpointMetadata
from .optimizer import AdamW, AdamWState, adamw_step
from .trainer import (
    EarlyStopping,
    EpochRecord,
    Trainer,
    TrainResult,
    evaluate,
    mean_loss,
    predict_probabilities,
    train,
)

__all__ = [
    "AdamW",
    "AdamWState",
    "Checkpoint",
    "CheckpointMetadata",
    "EarlyStopping",
    "EpochRecord",
    "TrainResult",
    "Trainer",
    "adamw_step",
    "evaluate",
    "mean_loss",
    "predict_probabilities",
    "train",
]
