# utils/tokenizer.py

"""
tokenizer.py – Vocabulary and Subword Tokenization

Builds a frequency-ranked vocabulary (reserved pieces, then every character seen
in the corpus, then whole words) and tokenizes sentences by greedy longest-prefix
matching: a word in the vocabulary becomes one piece, any other word is covered
by the longest known prefixes, and characters never seen map to [UNK].
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from config import CLS_ID, PAD_ID, RESERVED_PIECES, SEP_ID, UNK_ID
from .errors import DataError, UsageError


@dataclass(frozen=True)
class Vocabulary:
    """Ordered, unique pieces; ids 0-3 are the reserved pieces."""
    pieces: tuple[str, ...]

    def __post_init__(self) -> None:
        if tuple(self.pieces[:len(RESERVED_PIECES)]) != RESERVED_PIECES:
            raise DataError(f"vocabulary must start with the reserved pieces {list(RESERVED_PIECES)}")
        if len(set(self.pieces)) != len(self.pieces):
            raise DataError("vocabulary pieces must be unique")
        object.__setattr__(self, "_index", {piece: i for i, piece in enumerate(self.pieces)})

    def __len__(self) -> int:
        return len(self.pieces)

    def id_of(self, piece: str) -> int:
        return self._index.get(piece, UNK_ID)

    def __contains__(self, piece: str) -> bool:
        return piece in self._index

    @property
    def fingerprint(self) -> str:
        """SHA-256 of the newline-joined pieces."""
        return hashlib.sha256("\n".join(self.pieces).encode("utf-8")).hexdigest()


def build_vocab(sentences: Iterable[str], target_size: int) -> Vocabulary:
    """
    Builds a vocabulary of at most `target_size` pieces.

    Order: reserved pieces, characters (so any word made of seen characters can
    be spelled out), then whole words. Within each group pieces are ranked by
    descending frequency, ties broken lexicographically.

    Raises:
        UsageError: If `target_size` <= 4.
    """
    if target_size <= len(RESERVED_PIECES):
        raise UsageError(f"target_size must exceed {len(RESERVED_PIECES)}, got {target_size}")

    words: Counter[str] = Counter()
    for sentence in sentences:
        words.update(sentence.split())
    chars: Counter[str] = Counter()
    for word, count in words.items():
        for ch in word:
            chars[ch] += count

    def ranked(counter: Counter[str]) -> list[str]:
        return [piece for piece, _ in sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))]

    pieces = list(RESERVED_PIECES)
    seen = set(pieces)
    for piece in ranked(chars) + ranked(words):
        if len(pieces) >= target_size:
            break
        if piece not in seen:
            seen.add(piece)
            pieces.append(piece)
    return Vocabulary(tuple(pieces))


def _word_pieces(word: str, vocab: Vocabulary) -> list[int]:
    ids: list[int] = []
    start = 0
    while start < len(word):
        for end in range(len(word), start, -1):
            if word[start:end] in vocab:
                ids.append(vocab.id_of(word[start:end]))
                start = end
                break
        else:
            ids.append(UNK_ID)
            start += 1
    return ids


def tokenize(sentence: str, vocab: Vocabulary, max_len: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Encodes one sentence as exactly `max_len` ids.

    Layout: [CLS] pieces... [SEP] [PAD]... When the sentence is too long the
    pieces are cut so that [SEP] still lands at position max_len - 1.

    Returns:
        tuple[np.ndarray, np.ndarray]: int64 ids and a boolean mask of real tokens.
    """
    if max_len < 2:
        raise UsageError(f"max_len must be at least 2 to hold [CLS] and [SEP], got {max_len}")
    body: list[int] = []
    for word in sentence.split():
        body.extend(_word_pieces(word, vocab))
    tokens = [CLS_ID, *body[: max_len - 2], SEP_ID]
    ids = np.full(max_len, PAD_ID, dtype=np.int64)
    ids[: len(tokens)] = tokens
    mask = np.zeros(max_len, dtype=bool)
    mask[: len(tokens)] = True
    return ids, mask


def tokenize_batch(sentences: Iterable[str], vocab: Vocabulary, max_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Stacks `tokenize` over many sentences into (n, max_len) arrays."""
    encoded = [tokenize(s, vocab, max_len) for s in sentences]
    if not encoded:
        return np.zeros((0, max_len), dtype=np.int64), np.zeros((0, max_len), dtype=bool)
    ids, masks = zip(*encoded)
    return np.stack(ids), np.stack(masks)
