# training/checkpoint.py

"""
checkpoint.py – Trained Model Snapshot

A `Checkpoint` holds everything needed to rebuild a trained (and possibly
pruned) classifier: architecture, named weights, head gates, the training
hyperparameters, the vocabulary, the task and run metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from config import CHECKPOINT_FORMAT_VERSION, ModelConfig, TaskSpec, TrainConfig
from model import FigurativeClassifier, HeadMask
from utils.tokenizer import Vocabulary


@dataclass(frozen=True)
class CheckpointMetadata:
    epoch: int
    val_loss: float
    corpus_fingerprint: str
    format_version: int = CHECKPOINT_FORMAT_VERSION
    seed: int = 0


@dataclass
class Checkpoint:
    model_config: ModelConfig
    parameters: dict[str, np.ndarray]
    head_mask: HeadMask
    train_config: TrainConfig
    vocab: Vocabulary
    task: TaskSpec
    metadata: CheckpointMetadata = field(default_factory=lambda: CheckpointMetadata(0, float("nan"), ""))

    @classmethod
    def from_model(
        cls,
        model: FigurativeClassifier,
        train_config: TrainConfig,
        vocab: Vocabulary,
        task: TaskSpec,
        metadata: CheckpointMetadata,
    ) -> Checkpoint:
        return cls(
            model_config=model.config,
            parameters=model.state_dict(),
            head_mask=model.head_mask.copy(),
            train_config=train_config,
            vocab=vocab,
            task=task,
            metadata=metadata,
        )

    def to_model(self) -> FigurativeClassifier:
        """
        Rebuilds the classifier with the stored weights and gates.

        Raises:
            ShapeMismatchError: If the stored parameters do not fit `model_config`.
        """
        model = FigurativeClassifier(self.model_config, seed=self.metadata.seed, head_mask=self.head_mask)
        model.load_state_dict(self.parameters)
        return model

    def with_model(self, model: FigurativeClassifier) -> Checkpoint:
        """Same run data, weights and gates taken from `model`."""
        return Checkpoint.from_model(model, self.train_config, self.vocab, self.task, self.metadata)
