# figprune_db/repositories/importance.py

"""
importance.py – Importance Grid Repository

A grid is stored as CSV `layer,head,score`, one row per head, layers then
heads ascending, scores at full float64 precision. The non-tabular fields
(example count, task, split, reduction) live in a JSON sidecar next to it,
`<name>.meta.json`.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from config import GRID_COLUMNS, TaskSpec
from pruning.importance import ImportanceGrid
from utils.errors import DataError
from ..base import BaseRepository
from ..schema import normalize_header
from .report import ReportRepository

logger = logging.getLogger(__name__)


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


class ImportanceRepository(BaseRepository):
    """Saves and loads `ImportanceGrid` objects."""

    def save(self, grid: ImportanceGrid) -> None:
        n_layers, n_heads = grid.shape
        df = pd.DataFrame({
            "layer": np.repeat(np.arange(n_layers), n_heads),
            "head": np.tile(np.arange(n_heads), n_layers),
            "score": grid.scores.ravel(),
        }, columns=list(GRID_COLUMNS))
        self.write_frame(df)
        ReportRepository(sidecar_path(self.path)).save({
            "n_examples": grid.n_examples,
            "task": {"label_column": grid.task.label_column, "positive_value": grid.task.positive_value},
            "source_split": grid.source_split,
            "reduction": grid.reduction,
            "shape": [n_layers, n_heads],
        })
        logger.info(f"Wrote {n_layers}x{n_heads} importance grid to {self.path}")

    def load(self) -> ImportanceGrid:
        """
        Raises:
            SchemaError: If a column is missing.
            DataError: If the rows do not cover every (layer, head) exactly once.
        """
        df = normalize_header(self.read_frame(float_precision="round_trip"), "grid", self.path)
        if df.empty:
            raise DataError(f"{self.path}: importance grid has no rows")
        layers = df["layer"].astype(int).to_numpy()
        heads = df["head"].astype(int).to_numpy()
        n_layers, n_heads = int(layers.max()) + 1, int(heads.max()) + 1
        if len(df) != n_layers * n_heads or pd.Series(list(zip(layers, heads))).duplicated().any():
            raise DataError(f"{self.path}: rows do not cover a full {n_layers}x{n_heads} grid exactly once")
        scores = np.zeros((n_layers, n_heads), dtype=np.float64)
        scores[layers, heads] = df["score"].astype(np.float64).to_numpy()

        meta_repo = ReportRepository(sidecar_path(self.path))
        meta = meta_repo.load() if meta_repo.exists() else {}
        return ImportanceGrid(
            scores=scores,
            n_examples=int(meta.get("n_examples", 0)),
            task=TaskSpec(**meta["task"]) if "task" in meta else TaskSpec(),
            source_split=meta.get("source_split", "train"),
            reduction=meta.get("reduction", "mean"),
        )
