# figprune_db/schema.py

"""
schema.py – Artifact Column Schemas

Authoritative column layouts of every tabular artifact figprune reads or
writes, plus the header check shared by the repositories. Headers are matched
case-insensitively and with surrounding whitespace ignored.
"""

from __future__ import annotations

from pathlib import Path

import pandas as pd

from config import CORPUS_COLUMNS, GRID_COLUMNS, HISTORY_COLUMNS, REQUIRED_COLUMNS, SWEEP_COLUMNS
from utils.errors import SchemaError

# Format: artifact name -> (all columns in write order, columns that must be present)
TABLE_SCHEMAS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "corpus": (CORPUS_COLUMNS, REQUIRED_COLUMNS),
    "grid": (GRID_COLUMNS, GRID_COLUMNS),
    "history": (HISTORY_COLUMNS, HISTORY_COLUMNS),
    "sweep": (SWEEP_COLUMNS, SWEEP_COLUMNS),
}


def normalize_header(df: pd.DataFrame, table: str, path: str | Path) -> pd.DataFrame:
    """
    Lower-cases and strips column names, then checks the required columns.

    Raises:
        SchemaError: If a required column is missing or a name repeats.
    """
    _, required = TABLE_SCHEMAS[table]
    df = df.rename(columns=lambda c: str(c).strip().lower())
    if df.columns.duplicated().any():
        raise SchemaError(f"{path}: duplicated column names {list(df.columns)}")
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {missing}; expected {list(TABLE_SCHEMAS[table][0])}")
    return df
