# config.py

"""
config.py – Central Configuration File

Defines global constants and settings used throughout figprune. This includes
the reserved vocabulary pieces, the corpus schema, numerical constants of the
model and loss, the checkpoint format version, the report row order, the word
lists of the synthetic corpus, and the two named hyperparameter profiles
(`paper` and `desk`) every run starts from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, TypedDict

# ───────────────────────────────────────────────────────────
# Vocabulary
# ───────────────────────────────────────────────────────────

# Reserved pieces occupy ids 0-3 in every vocabulary, in this order.
PAD_PIECE: str = "[PAD]"
UNK_PIECE: str = "[UNK]"
CLS_PIECE: str = "[CLS]"
SEP_PIECE: str = "[SEP]"
RESERVED_PIECES: tuple[str, ...] = (PAD_PIECE, UNK_PIECE, CLS_PIECE, SEP_PIECE)
PAD_ID, UNK_ID, CLS_ID, SEP_ID = range(4)

# ───────────────────────────────────────────────────────────
# Corpus schema (one annotated sentence per row, tab separated)
# ───────────────────────────────────────────────────────────
CORPUS_COLUMNS: tuple[str, ...] = ("id", "expression", "sentence", "idiom", "metaphor", "split")
REQUIRED_COLUMNS: tuple[str, ...] = ("id", "expression", "sentence", "idiom", "split")
LABEL_VALUES: tuple[str, ...] = ("Yes", "No")
SPLIT_VALUES: tuple[str, ...] = ("train", "test")
TASK_COLUMNS: tuple[str, ...] = ("idiom", "metaphor")

# ───────────────────────────────────────────────────────────
# Numerics
# ───────────────────────────────────────────────────────────

# Added to attention scores of padded keys before the softmax.
ATTENTION_MASK_VALUE: float = -1e9
# Probabilities are clipped to [BCE_CLAMP, 1 - BCE_CLAMP] inside the loss only.
BCE_CLAMP: float = 1e-12
LAYER_NORM_EPS: float = 1e-12
DECISION_THRESHOLD: float = 0.5
# Early stopping counts an epoch as an improvement only below best - tolerance.
IMPROVEMENT_TOLERANCE: float = 1e-8

# ───────────────────────────────────────────────────────────
# Artifacts
# ───────────────────────────────────────────────────────────
CHECKPOINT_FORMAT_VERSION: int = 1
GRID_COLUMNS: tuple[str, ...] = ("layer", "head", "score")
HISTORY_COLUMNS: tuple[str, ...] = ("epoch", "train_loss", "val_loss", "val_accuracy")
SWEEP_COLUMNS: tuple[str, ...] = (
    "threshold", "retained", "pruned", "accuracy", "f1", "macro_precision", "macro_recall",
)

# Row order of the original-vs-pruned comparison table.
# Format: (display label, EvalReport attribute)
REPORT_ROWS: tuple[tuple[str, str], ...] = (
    ("Precision", "precision"),
    ("Recall", "recall"),
    ("F1-Score", "f1"),
    ("Accuracy", "accuracy"),
    ("Macro Avg Precision", "macro_precision"),
    ("Macro Avg Recall", "macro_recall"),
    ("Weighted Avg Precision", "weighted_precision"),
    ("Weighted Avg Recall", "weighted_recall"),
)

# Heatmap colour ramp endpoints (light for the lowest score, dark for the highest).
HEATMAP_LOW_RGB: tuple[int, int, int] = (247, 251, 255)
HEATMAP_HIGH_RGB: tuple[int, int, int] = (8, 48, 107)

# Environment variable naming the default JSON run config.
CONFIG_ENV_VAR: str = "FIGPRUNE_CONFIG"

# ───────────────────────────────────────────────────────────
# Synthetic figurative-marker corpus
# ───────────────────────────────────────────────────────────

# Filler words never overlap the marker words below.
SYNTHETIC_FILLER: tuple[str, ...] = (
    "the", "boat", "came", "home", "late", "after", "rain", "market", "was", "full",
    "of", "fish", "and", "rice", "she", "walked", "slowly", "along", "shore", "with",
    "her", "brother", "old", "house", "near", "temple", "stood", "quiet", "every",
    "morning", "they", "sang", "songs", "about", "village", "harvest", "child", "laughed",
    "river", "bank", "green", "field", "bright", "sun", "evening", "bells", "rang",
)
# Marker token sequences; a record is positive for a task exactly when its marker occurs.
SYNTHETIC_MARKERS: dict[str, tuple[str, ...]] = {
    "idiom": ("moonlit", "pickle"),
    "metaphor": ("iron", "heart"),
}
SYNTHETIC_MIN_FILLER: int = 4
SYNTHETIC_MAX_FILLER: int = 10
SYNTHETIC_TEST_FRACTION: float = 0.2

# ───────────────────────────────────────────────────────────
# Typed configuration objects
# ───────────────────────────────────────────────────────────

Profile = Literal["paper", "desk"]
Reduction = Literal["mean", "sum"]
ScoreSplit = Literal["train", "validation", "test"]


@dataclass(frozen=True)
class ModelConfig:
    """Architecture of the encoder + BiLSTM classifier."""
    vocab_size: int = 8000
    d_model: int = 768
    n_layers: int = 12
    n_heads: int = 12
    d_ff: int = 3072
    lstm_hidden: int = 128
    lstm_layers: int = 2
    max_len: int = 128
    dropout_rate: float = 0.1

    @property
    def d_head(self) -> int:
        return self.d_model // self.n_heads


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and early-stopping hyperparameters."""
    learning_rate: float = 2e-5
    batch_size: int = 16
    max_epochs: int = 20
    patience: int = 10
    weight_decay: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 7


@dataclass(frozen=True)
class TaskSpec:
    """Which corpus column is the binary label, and which value is positive."""
    label_column: Literal["idiom", "metaphor"] = "idiom"
    positive_value: str = "Yes"


@dataclass(frozen=True)
class PruneConfig:
    """Head-scoring and pruning options."""
    threshold: float = 0.0
    epsilon: float = 0.0
    score_split: ScoreSplit = "train"
    reduction: Reduction = "mean"
    sweep_thresholds: tuple[float, ...] = (0.0, 1e-6, 1e-5, 1e-4, 1e-3)


@dataclass(frozen=True)
class DataConfig:
    """Corpus generation and split options."""
    n: int = 200
    marker_rate: float = 0.5
    subset: int | None = None
    validation_fraction: float = 0.1


@dataclass(frozen=True)
class RunConfig:
    """Every setting of one run; each field has a profile-supplied default."""
    profile: Profile = "desk"
    seed: int = 7
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    task: TaskSpec = field(default_factory=TaskSpec)
    prune: PruneConfig = field(default_factory=PruneConfig)
    data: DataConfig = field(default_factory=DataConfig)


class ProfileDefaults(TypedDict):
    """Section-wise overrides that distinguish one profile from the dataclass defaults."""
    model: dict[str, int | float]
    train: dict[str, int | float]


# Named profiles. `paper` mirrors the published setup (12x12 encoder, 128-unit
# BiLSTM, lr 2e-5); `desk` is small enough to train from scratch in seconds.
PROFILES: dict[str, ProfileDefaults] = {
    "paper": {
        "model": {},
        "train": {},
    },
    "desk": {
        "model": {
            "vocab_size": 2000,
            "d_model": 64,
            "n_layers": 4,
            "n_heads": 4,
            "d_ff": 128,
            "lstm_hidden": 32,
        },
        "train": {
            "learning_rate": 1e-3,
        },
    },
}

# Current version of the application.
VERSION: str = "v1.0.0"

# Release notes for the current version.
RELEASE_NOTES: str = """
### v1.0.0
* **Feature:** Encoder + BiLSTM figurative-language classifier on a numpy autodiff core.
* **Feature:** Gradient-based head importance scoring, zero-score pruning and threshold sweeps.
* **Feature:** Table-style original-vs-pruned comparison, SVG heatmaps and run summaries.
"""
