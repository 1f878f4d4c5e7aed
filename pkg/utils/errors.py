# utils/errors.py

"""
errors.py – Exception Hierarchy

Every error figprune raises on purpose derives from `FigPruneError`. Input
problems subclass `ValueError`, runtime failures subclass `RuntimeError`, so
callers that only know the builtin families still catch them correctly. The CLI
maps the `ValueError` family to exit code 1 and everything else to 2.
"""

from __future__ import annotations


class FigPruneError(Exception):
    """Base class for all figprune errors."""


class UsageError(FigPruneError, ValueError):
    """An operation was called with arguments it cannot accept."""


class ConfigurationError(UsageError):
    """Shapes or configuration values do not conform."""


class DataError(FigPruneError, ValueError):
    """A corpus record or dataset violates its contract."""


class SchemaError(DataError):
    """A corpus file does not match the expected column schema."""


class TrainingError(FigPruneError, RuntimeError):
    """Training produced a non-finite loss or gradient."""


class ScoringError(FigPruneError, RuntimeError):
    """Head scoring produced a non-finite gradient."""


class CheckpointError(DataError):
    """A checkpoint file cannot be restored; a bad input file, so exit code 1."""


class VersionMismatchError(CheckpointError):
    """The checkpoint was written with a different format version."""


class ShapeMismatchError(CheckpointError):
    """Stored parameter shapes do not match the model configuration."""


class TruncatedCheckpointError(CheckpointError):
    """The checkpoint file is shorter than declared or its payload is corrupt."""
