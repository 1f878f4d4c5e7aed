import pathlib
import sys

import numpy as np
import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from config import ModelConfig, TaskSpec, TrainConfig  # noqa: E402
from model import FigurativeClassifier  # noqa: E402
from utils.corpus import make_synthetic_corpus  # noqa: E402

TINY = ModelConfig(
    vocab_size=24, d_model=8, n_layers=2, n_heads=2, d_ff=16,
    lstm_hidden=4, lstm_layers=2, max_len=12, dropout_rate=0.0,
)


def random_batch(rng: np.random.Generator, batch: int, seq: int, vocab_size: int, min_len: int = 1):
    """Random ids with trailing padding; every row has at least `min_len` real tokens."""
    lengths = rng.integers(min_len, seq + 1, size=batch)
    ids = rng.integers(1, vocab_size, size=(batch, seq))
    mask = np.arange(seq)[None, :] < lengths[:, None]
    ids = np.where(mask, ids, 0)
    return ids, mask


@pytest.fixture
def tiny_config() -> ModelConfig:
    return TINY


@pytest.fixture
def tiny_model() -> FigurativeClassifier:
    return FigurativeClassifier(TINY, seed=3)


@pytest.fixture
def tiny_train_config() -> TrainConfig:
    return TrainConfig(learning_rate=1e-2, batch_size=4, max_epochs=3, patience=2, seed=5)


@pytest.fixture
def idiom_task() -> TaskSpec:
    return TaskSpec("idiom", "Yes")


@pytest.fixture
def synthetic_records():
    return make_synthetic_corpus(40, 0.5, seed=1)
