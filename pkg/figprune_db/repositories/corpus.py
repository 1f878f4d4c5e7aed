# figprune_db/repositories/corpus.py

"""
corpus.py – Corpus File Repository

Reads and writes annotated corpora as UTF-8 tab-separated files with the header
`id expression sentence idiom metaphor split` (metaphor optional). Label cells
are normalised to Yes/No ignoring case and surrounding whitespace; an empty
metaphor cell means the record carries no metaphor annotation.
"""

from __future__ import annotations

import csv
import logging

import pandas as pd

from config import CORPUS_COLUMNS, LABEL_VALUES, SPLIT_VALUES
from utils.corpus import CorpusRecord
from utils.errors import DataError, SchemaError
from ..base import BaseRepository
from ..schema import normalize_header

logger = logging.getLogger(__name__)

_LABELS = {value.lower(): value for value in LABEL_VALUES}


def _label(value: str, column: str, record_id: str, row: int) -> str:
    normalised = _LABELS.get(value.strip().lower())
    if normalised is None:
        raise DataError(f"row {row} (id {record_id!r}): {column} must be Yes or No, got {value!r}")
    return normalised


class CorpusRepository(BaseRepository):
    """
    Manages one corpus TSV file.
    """

    def load(self) -> list[CorpusRecord]:
        """
        Parses every row, rejecting the first bad one with its row number.

        Returns:
            list[CorpusRecord]: Records in file order; a header-only file gives [].

        Raises:
            SchemaError: If a required column is missing.
            DataError: On a bad label, empty sentence, duplicate id or unknown split.
        """
        self._require_file()
        try:
            df = pd.read_csv(
                self.path, sep="\t", dtype=str, keep_default_na=False,
                quoting=csv.QUOTE_NONE, escapechar="\\", encoding="utf-8",
            )
        except pd.errors.EmptyDataError as e:
            raise SchemaError(f"{self.path}: file has no header row") from e
        df = normalize_header(df, "corpus", self.path)
        has_metaphor = "metaphor" in df.columns

        records: list[CorpusRecord] = []
        seen: set[str] = set()
        for offset, row in enumerate(df.to_dict(orient="records")):
            line = offset + 2
            record_id = row["id"].strip()
            if not record_id:
                raise DataError(f"row {line}: empty id")
            if record_id in seen:
                raise DataError(f"row {line}: duplicate id {record_id!r}")
            seen.add(record_id)
            sentence = row["sentence"].strip()
            if not sentence:
                raise DataError(f"row {line} (id {record_id!r}): empty sentence")
            split = row["split"].strip().lower()
            if split not in SPLIT_VALUES:
                raise DataError(f"row {line} (id {record_id!r}): split must be train or test, got {row['split']!r}")
            metaphor_cell = row["metaphor"] if has_metaphor else ""
            records.append(CorpusRecord(
                id=record_id,
                expression=row["expression"].strip(),
                sentence=sentence,
                idiom=_label(row["idiom"], "idiom", record_id, line),
                metaphor=_label(metaphor_cell, "metaphor", record_id, line) if metaphor_cell.strip() else None,
                split=split,
            ))
        logger.info(f"Loaded {len(records)} records from {self.path}")
        return records

    def save(self, records: list[CorpusRecord]) -> None:
        """
        Writes records in the full six-column layout.

        Raises:
            DataError: If a field contains a tab or a line break.
        """
        rows = []
        for record in records:
            row = {column: record.get(column) or "" for column in CORPUS_COLUMNS}
            for column, value in row.items():
                if any(ch in value for ch in "\t\r\n"):
                    raise DataError(f"record {record['id']!r}: {column} contains a tab or line break")
            rows.append(row)
        df = pd.DataFrame(rows, columns=list(CORPUS_COLUMNS))
        self.write_frame(df, sep="\t", quoting=csv.QUOTE_NONE, escapechar="\\")
        logger.info(f"Wrote {len(records)} records to {self.path}")
