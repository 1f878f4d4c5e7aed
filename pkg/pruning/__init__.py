# pruning/__init__.py

"""
Head importance scoring, pruning and original-vs-pruned comparison.
"""

from .compare import ComparisonReport, compare
from .importance import ImportanceGrid, LayerProfile, layer_profile, score_heads
from .pruner import PruneReport, SweepRow, prune, prune_mask, sweep_thresholds

__all__ = [
    "ComparisonReport",
    "ImportanceGrid",
    "LayerProfile",
    "PruneReport",
    "SweepRow",
    "compare",
    "layer_profile",
    "prune",
    "prune_mask",
    "score_heads",
    "sweep_thresholds",
]
