# figprune_db/repositories/history.py

"""
history.py – Training History and Threshold Sweep Repositories

Per-epoch training history (`epoch,train_loss,val_loss,val_accuracy`) and
threshold sweep results, both as CSV with full-precision floats.
"""

from __future__ import annotations

import dataclasses
import logging

import pandas as pd

from config import HISTORY_COLUMNS, SWEEP_COLUMNS
from pruning.pruner import SweepRow
from training.trainer import EpochRecord
from ..base import BaseRepository
from ..schema import normalize_header

logger = logging.getLogger(__name__)


class HistoryRepository(BaseRepository):

    def save(self, history: list[EpochRecord]) -> None:
        df = pd.DataFrame([dataclasses.asdict(r) for r in history], columns=list(HISTORY_COLUMNS))
        self.write_frame(df)
        logger.info(f"Wrote {len(history)} epochs of history to {self.path}")

    def load(self) -> list[EpochRecord]:
        df = normalize_header(self.read_frame(float_precision="round_trip"), "history", self.path)
        return [
            EpochRecord(int(r["epoch"]), float(r["train_loss"]), float(r["val_loss"]), float(r["val_accuracy"]))
            for r in df.to_dict(orient="records")
        ]


class SweepRepository(BaseRepository):

    def save(self, rows: list[SweepRow]) -> None:
        df = pd.DataFrame([dataclasses.asdict(r) for r in rows], columns=list(SWEEP_COLUMNS))
        self.write_frame(df)
        logger.info(f"Wrote {len(rows)} sweep rows to {self.path}")

    def load(self) -> list[SweepRow]:
        df = normalize_header(self.read_frame(float_precision="round_trip"), "sweep", self.path)
        return [
            SweepRow(
                threshold=float(r["threshold"]),
                retained=int(r["retained"]),
                pruned=int(r["pruned"]),
                accuracy=float(r["accuracy"]),
                f1=float(r["f1"]),
                macro_precision=float(r["macro_precision"]),
                macro_recall=float(r["macro_recall"]),
            )
            for r in df.to_dict(orient="records")
        ]
