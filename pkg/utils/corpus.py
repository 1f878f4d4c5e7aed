# utils/corpus.py

"""
corpus.py – Corpus Records, Subsets and Splits

Pure functions over annotated sentences: binding a task's labels, drawing a
class-balanced subset, generating the synthetic figurative-marker corpus,
carving train/validation/test splits and encoding a split into id arrays.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, TypedDict

import numpy as np
from sklearn.model_selection import train_test_split

from config import (
    SYNTHETIC_FILLER,
    SYNTHETIC_MARKERS,
    SYNTHETIC_MAX_FILLER,
    SYNTHETIC_MIN_FILLER,
    SYNTHETIC_TEST_FRACTION,
    TaskSpec,
)
from .errors import DataError, UsageError
from .tokenizer import Vocabulary, tokenize_batch

logger = logging.getLogger(__name__)


class CorpusRecord(TypedDict):
    """One annotated sentence (one corpus row)."""
    id: str
    expression: str
    sentence: str
    idiom: str
    metaphor: Optional[str]
    split: str


@dataclass
class Splits:
    train: list[CorpusRecord]
    validation: list[CorpusRecord]
    test: list[CorpusRecord]

    def by_name(self, name: str) -> list[CorpusRecord]:
        if name not in ("train", "validation", "test"):
            raise UsageError(f"unknown split {name!r}; expected train, validation or test")
        return getattr(self, name)


@dataclass
class EncodedSplit:
    """Token ids, real-token masks and 0/1 labels of one split, in record order."""
    ids: np.ndarray
    pad_mask: np.ndarray
    labels: np.ndarray
    record_ids: list[str]

    def __len__(self) -> int:
        return len(self.record_ids)

    def batch(self, index: np.ndarray) -> EncodedSplit:
        return EncodedSplit(
            ids=self.ids[index],
            pad_mask=self.pad_mask[index],
            labels=self.labels[index],
            record_ids=[self.record_ids[i] for i in index],
        )


def bind_labels(records: Sequence[CorpusRecord], task: TaskSpec) -> np.ndarray:
    """
    0/1 labels of `records` for `task`.

    Raises:
        DataError: If a record has no value in the task's label column.
    """
    labels = np.empty(len(records), dtype=np.int64)
    for i, record in enumerate(records):
        value = record.get(task.label_column)
        if value is None:
            raise DataError(f"record {record['id']!r} has no {task.label_column!r} label")
        labels[i] = int(value == task.positive_value)
    return labels


def balanced_subset(records: Sequence[CorpusRecord], task: TaskSpec, n: int, seed: int) -> list[CorpusRecord]:
    """
    Draws n/2 positive and n/2 negative records without replacement.

    The result order is a seeded shuffle, so the same seed yields the same ids.

    Raises:
        UsageError: If n is negative or odd.
        DataError: If either class has fewer than n/2 records.
    """
    if n < 0 or n % 2:
        raise UsageError(f"balanced subset size must be a non-negative even number, got {n}")
    if n == 0:
        return []
    labels = bind_labels(records, task)
    positives = np.nonzero(labels == 1)[0]
    negatives = np.nonzero(labels == 0)[0]
    half = n // 2
    if len(positives) < half or len(negatives) < half:
        raise DataError(
            f"cannot draw {half} per class: {len(positives)} positive and {len(negatives)} negative available"
        )
    rng = np.random.default_rng(seed)
    chosen = np.concatenate([
        rng.choice(positives, size=half, replace=False),
        rng.choice(negatives, size=half, replace=False),
    ])
    return [records[int(i)] for i in chosen[rng.permutation(n)]]


def _plant(chunks: list[str], marker: tuple[str, ...], rng: np.random.Generator) -> list[str]:
    # A planted marker is one chunk; later markers land between chunks, never inside one.
    at = int(rng.integers(0, len(chunks) + 1))
    return chunks[:at] + [" ".join(marker)] + chunks[at:]


def make_synthetic_corpus(n: int, marker_rate: float, seed: int) -> list[CorpusRecord]:
    """
    Generates `n` filler-word sentences with planted figurative markers.

    For each task a fixed number round(n * marker_rate) of records, chosen
    independently per task, carry that task's marker phrase; a record is labelled
    Yes for a task exactly when its marker occurs. Splits are 80/20 train/test,
    stratified on the idiom label when both classes are large enough, otherwise
    a plain seeded shuffle.

    Raises:
        UsageError: If n is odd or marker_rate lies outside [0, 1].
    """
    if n < 0 or n % 2:
        raise UsageError(f"synthetic corpus size must be a non-negative even number, got {n}")
    if not 0.0 <= marker_rate <= 1.0:
        raise UsageError(f"marker_rate must lie in [0, 1], got {marker_rate}")
    if n == 0:
        return []

    rng = np.random.default_rng(seed)
    n_marked = int(round(n * marker_rate))
    marked = {task: set(rng.permutation(n)[:n_marked].tolist()) for task in SYNTHETIC_MARKERS}

    records: list[CorpusRecord] = []
    for i in range(n):
        length = int(rng.integers(SYNTHETIC_MIN_FILLER, SYNTHETIC_MAX_FILLER + 1))
        words = [SYNTHETIC_FILLER[j] for j in rng.integers(0, len(SYNTHETIC_FILLER), size=length)]
        expression = ""
        for task, marker in SYNTHETIC_MARKERS.items():
            if i in marked[task]:
                words = _plant(words, marker, rng)
                expression = expression or " ".join(marker)
        records.append(CorpusRecord(
            id=f"syn-{i:05d}",
            expression=expression,
            sentence=" ".join(words),
            idiom="Yes" if i in marked["idiom"] else "No",
            metaphor="Yes" if i in marked["metaphor"] else "No",
            split="train",
        ))

    idiom = [r["idiom"] for r in records]
    index = np.arange(n)
    try:
        _, test_idx = train_test_split(
            index, test_size=SYNTHETIC_TEST_FRACTION, stratify=idiom, random_state=seed
        )
    except ValueError:
        # one class too small for the test share, or only one class at all
        _, test_idx = train_test_split(index, test_size=SYNTHETIC_TEST_FRACTION, random_state=seed)
    for i in test_idx:
        records[int(i)]["split"] = "test"
    logger.info(f"Generated {n} synthetic records ({n_marked} marked per task, {len(test_idx)} test).")
    return records


def split_dataset(
    records: Sequence[CorpusRecord], task: TaskSpec, validation_fraction: float, seed: int
) -> Splits:
    """
    Separates the test split and holds out a validation share of the train split.

    The hold-out is stratified on the task label when every class has at least
    two members, otherwise it is a plain seeded shuffle.

    Raises:
        DataError: If the train split has fewer than two records.
    """
    if not 0.0 < validation_fraction < 1.0:
        raise UsageError(f"validation_fraction must lie in (0, 1), got {validation_fraction}")
    train = [r for r in records if r["split"] == "train"]
    test = [r for r in records if r["split"] == "test"]
    if len(train) < 2:
        raise DataError(f"need at least 2 train records to carve a validation split, got {len(train)}")
    labels = bind_labels(train, task)
    index = np.arange(len(train))
    try:
        fit_idx, val_idx = train_test_split(
            index, test_size=validation_fraction, stratify=labels, random_state=seed
        )
    except ValueError:
        logger.warning("Stratified validation split impossible; falling back to a plain shuffle.")
        fit_idx, val_idx = train_test_split(index, test_size=validation_fraction, random_state=seed)
    return Splits(
        train=[train[int(i)] for i in fit_idx],
        validation=[train[int(i)] for i in val_idx],
        test=test,
    )


def encode_split(
    records: Sequence[CorpusRecord], vocab: Vocabulary, max_len: int, task: TaskSpec
) -> EncodedSplit:
    ids, pad_mask = tokenize_batch((r["sentence"] for r in records), vocab, max_len)
    return EncodedSplit(
        ids=ids,
        pad_mask=pad_mask,
        labels=bind_labels(records, task),
        record_ids=[r["id"] for r in records],
    )


def corpus_fingerprint(records: Sequence[CorpusRecord]) -> str:
    """SHA-256 of the records as canonical JSON, in corpus order."""
    payload = json.dumps(list(records), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
