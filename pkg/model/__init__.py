# model/__init__.py

"""
Encoder + BiLSTM classifier built on the autodiff core in `utils.autodiff`.
"""

from .attention import Encoder, EncoderLayer, HeadMask, MultiHeadSelfAttention
from .classifier import FigurativeClassifier, ModelOutput, bce_loss
from .layers import LayerNorm, Linear, Module
from .lstm import BiLSTM, LSTMDirection

__all__ = [
    "BiLSTM",
    "Encoder",
    "EncoderLayer",
    "FigurativeClassifier",
    "HeadMask",
    "LSTMDirection",
    "LayerNorm",
    "Linear",
    "Module",
    "ModelOutput",
    "MultiHeadSelfAttention",
    "bce_loss",
]
