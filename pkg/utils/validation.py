# utils/validation.py

"""
validation.py – Configuration Validation

Sanity checks for every section of a `RunConfig`. Each check raises a
`ConfigurationError` whose message names the offending dotted field, so a bad
value in a JSON config or on the command line is reported the same way.
"""

from __future__ import annotations

from config import (
    PROFILES,
    TASK_COLUMNS,
    DataConfig,
    ModelConfig,
    PruneConfig,
    RunConfig,
    TaskSpec,
    TrainConfig,
)
from .errors import ConfigurationError

# Model dimensions that must be at least 1.
POSITIVE_MODEL_FIELDS: tuple[str, ...] = (
    "vocab_size", "d_model", "n_layers", "n_heads", "d_ff", "lstm_hidden", "lstm_layers", "max_len",
)
SCORE_SPLITS: tuple[str, ...] = ("train", "validation", "test")
REDUCTIONS: tuple[str, ...] = ("mean", "sum")


def _require(condition: bool, field: str, message: str) -> None:
    if not condition:
        raise ConfigurationError(f"{field}: {message}")


def validate_model_config(config: ModelConfig, prefix: str = "model") -> None:
    """
    Raises:
        ConfigurationError: If a dimension is below 1, d_model is not divisible
            by n_heads, or the dropout rate lies outside [0, 1).
    """
    for name in POSITIVE_MODEL_FIELDS:
        value = getattr(config, name)
        _require(isinstance(value, int) and value >= 1, f"{prefix}.{name}", f"must be an integer >= 1, got {value!r}")
    _require(
        config.d_model % config.n_heads == 0,
        f"{prefix}.d_model",
        f"{config.d_model} is not divisible by n_heads {config.n_heads}",
    )
    _require(0.0 <= config.dropout_rate < 1.0, f"{prefix}.dropout_rate", f"must lie in [0, 1), got {config.dropout_rate}")


def validate_train_config(config: TrainConfig, prefix: str = "train") -> None:
    _require(config.learning_rate > 0, f"{prefix}.learning_rate", "must be positive")
    _require(config.batch_size >= 1, f"{prefix}.batch_size", "must be >= 1")
    _require(config.max_epochs >= 1, f"{prefix}.max_epochs", "must be >= 1")
    _require(
        1 <= config.patience <= config.max_epochs,
        f"{prefix}.patience",
        f"must lie in [1, max_epochs={config.max_epochs}], got {config.patience}",
    )
    _require(config.weight_decay >= 0, f"{prefix}.weight_decay", "must be non-negative")
    _require(0.0 <= config.beta1 < 1.0, f"{prefix}.beta1", "must lie in [0, 1)")
    _require(0.0 <= config.beta2 < 1.0, f"{prefix}.beta2", "must lie in [0, 1)")
    _require(config.epsilon > 0, f"{prefix}.epsilon", "must be positive")


def validate_task(task: TaskSpec, prefix: str = "task") -> None:
    _require(
        task.label_column in TASK_COLUMNS,
        f"{prefix}.label_column",
        f"must be one of {list(TASK_COLUMNS)}, got {task.label_column!r}",
    )
    _require(bool(task.positive_value), f"{prefix}.positive_value", "must be non-empty")


def validate_prune_config(config: PruneConfig, prefix: str = "prune") -> None:
    _require(config.threshold >= 0, f"{prefix}.threshold", f"must be non-negative, got {config.threshold}")
    _require(config.epsilon >= 0, f"{prefix}.epsilon", f"must be non-negative, got {config.epsilon}")
    _require(config.score_split in SCORE_SPLITS, f"{prefix}.score_split", f"must be one of {list(SCORE_SPLITS)}")
    _require(config.reduction in REDUCTIONS, f"{prefix}.reduction", f"must be one of {list(REDUCTIONS)}")
    _require(
        all(t >= 0 for t in config.sweep_thresholds),
        f"{prefix}.sweep_thresholds",
        "every threshold must be non-negative",
    )


def validate_data_config(config: DataConfig, prefix: str = "data") -> None:
    _require(config.n >= 0 and config.n % 2 == 0, f"{prefix}.n", f"must be a non-negative even number, got {config.n}")
    _require(0.0 <= config.marker_rate <= 1.0, f"{prefix}.marker_rate", "must lie in [0, 1]")
    _require(
        config.subset is None or (config.subset >= 0 and config.subset % 2 == 0),
        f"{prefix}.subset",
        f"must be a non-negative even number, got {config.subset}",
    )
    _require(
        0.0 < config.validation_fraction < 1.0,
        f"{prefix}.validation_fraction",
        "must lie in (0, 1)",
    )


def validate_run_config(config: RunConfig) -> None:
    """Validates every section of a run configuration."""
    _require(config.profile in PROFILES, "profile", f"must be one of {sorted(PROFILES)}, got {config.profile!r}")
    validate_model_config(config.model)
    validate_train_config(config.train)
    validate_task(config.task)
    validate_prune_config(config.prune)
    validate_data_config(config.data)
