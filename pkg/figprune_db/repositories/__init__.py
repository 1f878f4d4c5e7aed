"""
repositories/__init__.py - Expose repository classes
"""
from .corpus import CorpusRepository
from .checkpoint import CheckpointRepository
from .importance import ImportanceRepository
from .history import HistoryRepository, SweepRepository
from .report import ReportRepository

__all__ = [
    'CorpusRepository',
    'CheckpointRepository',
    'ImportanceRepository',
    'HistoryRepository',
    'SweepRepository',
    'ReportRepository',
]
