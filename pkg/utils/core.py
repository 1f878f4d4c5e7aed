# utils/core.py

"""
core.py – Run Configuration Loading

Assembles a `RunConfig` from three layers, later layers winning:
profile defaults, an optional JSON config file, then explicit overrides given
as dotted keys (e.g. `{"train.learning_rate": 0.01}`). The JSON file defaults to
the path in the FIGPRUNE_CONFIG environment variable.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping

from config import (
    CONFIG_ENV_VAR,
    PROFILES,
    DataConfig,
    ModelConfig,
    PruneConfig,
    RunConfig,
    TaskSpec,
    TrainConfig,
)
from .errors import ConfigurationError, UsageError
from .validation import validate_run_config

logger = logging.getLogger(__name__)

SECTIONS: dict[str, type] = {
    "model": ModelConfig,
    "train": TrainConfig,
    "task": TaskSpec,
    "prune": PruneConfig,
    "data": DataConfig,
}
TOP_LEVEL_FIELDS: tuple[str, ...] = ("profile", "seed")


def load_json_config(path: str | Path) -> dict[str, Any]:
    """
    Reads a JSON config file into a dictionary.

    Raises:
        UsageError: If the file is missing or is not a JSON object.
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise UsageError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return data


def _coerce(section: type, name: str, value: Any) -> Any:
    default = next(f for f in dataclasses.fields(section) if f.name == name).default
    if isinstance(default, tuple) and isinstance(value, list):
        return tuple(value)
    if isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _merge_section(target: dict[str, dict[str, Any]], key: str, values: Mapping[str, Any]) -> None:
    section = SECTIONS[key]
    known = {f.name for f in dataclasses.fields(section)}
    for name, value in values.items():
        if name not in known:
            raise ConfigurationError(f"unknown config field {key}.{name}")
        target[key][name] = _coerce(section, name, value)


def load_run_config(
    path: str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """
    Builds and validates a `RunConfig`.

    Args:
        path (str | Path | None): JSON config file; falls back to $FIGPRUNE_CONFIG.
        overrides (Mapping[str, Any] | None): Dotted keys such as "profile",
            "seed" or "train.batch_size". `None` values are ignored.

    Raises:
        ConfigurationError: On an unknown field or an invalid value.
        UsageError: If the config file cannot be read.
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    path = path or os.environ.get(CONFIG_ENV_VAR) or None
    file_values = load_json_config(path) if path else {}
    if path:
        logger.info(f"Loaded run config from {path}")

    for key in file_values:
        if key not in SECTIONS and key not in TOP_LEVEL_FIELDS:
            raise ConfigurationError(f"unknown config field {key}")
    for key in overrides:
        head = key.split(".", 1)[0]
        if "." not in key and key not in TOP_LEVEL_FIELDS or "." in key and head not in SECTIONS:
            raise ConfigurationError(f"unknown config field {key}")

    profile = overrides.get("profile", file_values.get("profile", RunConfig.profile))
    if profile not in PROFILES:
        raise ConfigurationError(f"profile: must be one of {sorted(PROFILES)}, got {profile!r}")

    sections: dict[str, dict[str, Any]] = {key: {} for key in SECTIONS}
    for key, values in PROFILES[profile].items():
        _merge_section(sections, key, values)
    for key in SECTIONS:
        section_values = file_values.get(key, {})
        if not isinstance(section_values, dict):
            raise ConfigurationError(f"{key}: must be a JSON object")
        _merge_section(sections, key, section_values)

    seed = overrides.get("seed", file_values.get("seed", RunConfig.seed))
    if "seed" in file_values or "seed" in overrides:
        sections["train"].setdefault("seed", seed)
    for key, value in overrides.items():
        if "." in key:
            section, name = key.split(".", 1)
            _merge_section(sections, section, {name: value})
    if "seed" in overrides:
        sections["train"]["seed"] = seed

    try:
        config = RunConfig(
            profile=profile,
            seed=int(seed),
            **{key: SECTIONS[key](**values) for key, values in sections.items()},
        )
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"invalid config value: {e}") from e
    validate_run_config(config)
    return config


def run_config_to_dict(config: RunConfig) -> dict[str, Any]:
    """JSON-ready dictionary of a run config (tuples become lists)."""
    def plain(value: Any) -> Any:
        if isinstance(value, tuple):
            return [plain(v) for v in value]
        if isinstance(value, dict):
            return {k: plain(v) for k, v in value.items()}
        return value

    return plain(dataclasses.asdict(config))
