# model/layers.py

"""
layers.py – Building Blocks

`Module` keeps a registry of named parameters and child modules so a model can
list, zero, save and restore its weights by dotted name. `Linear`, `LayerNorm`
and `dropout` are the pieces the encoder, BiLSTM and classifier are assembled from.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from config import LAYER_NORM_EPS
from utils.autodiff import Parameter, Tensor, mul
from utils.errors import ConfigurationError, ShapeMismatchError


def uniform_init(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) draw."""
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Module:
    """Base class holding parameters and sub-modules under stable names."""

    def __init__(self) -> None:
        self._parameters: dict[str, Parameter] = {}
        self._modules: dict[str, Module] = {}
        self.training: bool = False
        self.dropout_rng: np.random.Generator | None = None

    def add_parameter(self, name: str, value: np.ndarray, trainable: bool = True) -> Parameter:
        if name in self._parameters or name in self._modules:
            raise ConfigurationError(f"duplicate member name {name!r}")
        param = Parameter(value, name=name, trainable=trainable)
        self._parameters[name] = param
        return param

    def add_module(self, name: str, module: Module) -> Module:
        if name in self._parameters or name in self._modules:
            raise ConfigurationError(f"duplicate member name {name!r}")
        self._modules[name] = module
        return module

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Parameter]]:
        for name, param in self._parameters.items():
            yield prefix + name, param
        for name, module in self._modules.items():
            yield from module.named_parameters(prefix + name + ".")

    def parameters(self) -> list[Parameter]:
        return [p for _, p in self.named_parameters()]

    def modules(self) -> Iterator[Module]:
        yield self
        for module in self._modules.values():
            yield from module.modules()

    def assign_names(self) -> None:
        """Stamps each parameter with its full dotted path and checks uniqueness."""
        seen: set[str] = set()
        for full_name, param in self.named_parameters():
            if full_name in seen:
                raise ConfigurationError(f"parameter name {full_name!r} is not unique")
            seen.add(full_name)
            param.name = full_name

    def train(self, mode: bool = True, rng: np.random.Generator | None = None) -> Module:
        for module in self.modules():
            module.training = mode
            module.dropout_rng = rng if mode else None
        return self

    def eval(self) -> Module:
        return self.train(False)

    def zero_grad(self) -> None:
        for param in self.parameters():
            param.grad = None

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: param.data.copy() for name, param in self.named_parameters()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        """
        Copies arrays into the parameters of the same name.

        Raises:
            ShapeMismatchError: If names differ or any shape disagrees.
        """
        own = dict(self.named_parameters())
        missing = sorted(set(own) - set(state))
        unexpected = sorted(set(state) - set(own))
        if missing or unexpected:
            raise ShapeMismatchError(f"parameter names differ: missing={missing}, unexpected={unexpected}")
        for name, param in own.items():
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != param.shape:
                raise ShapeMismatchError(
                    f"parameter {name!r}: stored shape {list(value.shape)} != model shape {list(param.shape)}"
                )
            param.data = value.copy()


class Linear(Module):
    """y = x @ weight + bias, weight stored as (in_features, out_features)."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator):
        super().__init__()
        self.weight = self.add_parameter("weight", uniform_init(rng, (in_features, out_features), in_features))
        self.bias = self.add_parameter("bias", np.zeros(out_features))

    def __call__(self, x: Tensor) -> Tensor:
        return x @ self.weight + self.bias


class LayerNorm(Module):
    """Normalises the last axis to zero mean / unit variance, then scales and shifts."""

    def __init__(self, width: int, eps: float = LAYER_NORM_EPS):
        super().__init__()
        self.eps = eps
        self.gamma = self.add_parameter("gamma", np.ones(width))
        self.beta = self.add_parameter("beta", np.zeros(width))

    def __call__(self, x: Tensor) -> Tensor:
        centered = x - x.mean(axis=-1, keepdims=True)
        variance = (centered * centered).mean(axis=-1, keepdims=True)
        return centered * (variance + self.eps) ** -0.5 * self.gamma + self.beta


def dropout(x: Tensor, rate: float, module: Module) -> Tensor:
    """Inverted dropout; identity outside training or when `rate` is 0."""
    if not module.training or rate <= 0.0:
        return x
    if module.dropout_rng is None:
        raise ConfigurationError("dropout in training mode needs a seeded generator (Module.train(rng=...))")
    keep = (module.dropout_rng.random(x.shape) >= rate) / (1.0 - rate)
    return mul(x, keep)
