# utils/__init__.py

"""
utils – Main utility package for figprune
"""

from .errors import (
    FigPruneError,
    UsageError,
    ConfigurationError,
    DataError,
    SchemaError,
    TrainingError,
    ScoringError,
    CheckpointError,
    VersionMismatchError,
    ShapeMismatchError,
    TruncatedCheckpointError,
)
from .autodiff import Tensor, Parameter, no_grad
from .core import load_run_config, run_config_to_dict
from .validation import validate_run_config

__all__ = [
    # errors
    "FigPruneError",
    "UsageError",
    "ConfigurationError",
    "DataError",
    "SchemaError",
    "TrainingError",
    "ScoringError",
    "CheckpointError",
    "VersionMismatchError",
    "ShapeMismatchError",
    "TruncatedCheckpointError",
    # autodiff
    "Tensor",
    "Parameter",
    "no_grad",
    # configuration
    "load_run_config",
    "run_config_to_dict",
    "validate_run_config",
]
