# figprune_db/__init__.py

"""
figprune_db – Top-level API for figprune's artifact storage.
Exposes repository classes for every file the pipeline reads or writes.
"""

import logging

from .base import BaseRepository
from .schema import TABLE_SCHEMAS, normalize_header
from .repositories import (
    CorpusRepository,
    CheckpointRepository,
    ImportanceRepository,
    HistoryRepository,
    SweepRepository,
    ReportRepository,
)

# Configure a basic logger for the figprune packages (stderr)
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

__all__ = [
    "BaseRepository",
    "TABLE_SCHEMAS",
    "normalize_header",
    "CorpusRepository",
    "CheckpointRepository",
    "ImportanceRepository",
    "HistoryRepository",
    "SweepRepository",
    "ReportRepository",
]
