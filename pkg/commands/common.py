# commands/common.py

"""
common.py – Shared CLI Plumbing

Flags every subcommand accepts (config file, profile, seed), run-config
assembly from those flags plus per-command overrides, the config echo written
next to every output, and corpus loading and splitting as the training and
scoring commands both need it.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Any

from config import CONFIG_ENV_VAR, PROFILES, DataConfig, RunConfig, TaskSpec, TASK_COLUMNS
from figprune_db import CorpusRepository, ReportRepository
from utils.core import load_run_config, run_config_to_dict
from utils.corpus import CorpusRecord, Splits, balanced_subset, split_dataset

logger = logging.getLogger(__name__)

FORMATTER = argparse.ArgumentDefaultsHelpFormatter


def config_parent() -> argparse.ArgumentParser:
    """Parent parser holding the run-config flags shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("run configuration")
    group.add_argument(
        "--config", default=None,
        help=f"JSON run config; falls back to ${CONFIG_ENV_VAR} when unset",
    )
    group.add_argument("--profile", choices=sorted(PROFILES), default=None, help="hyperparameter profile (config: profile)")
    group.add_argument("--seed", type=int, default=None, help="master seed (config: seed, also train.seed)")
    return parent


def add_task_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--task", choices=TASK_COLUMNS, default=None, help="label column (config: task.label_column)")


def run_config(args: argparse.Namespace, **overrides: Any) -> RunConfig:
    """
    Run config from --config/--profile/--seed plus dotted overrides.

    Overrides whose value is None are ignored, so unset flags leave the
    profile or file value in place.
    """
    merged: dict[str, Any] = {"profile": args.profile, "seed": args.seed}
    if getattr(args, "task", None) is not None:
        merged["task.label_column"] = args.task
    merged.update(overrides)
    return load_run_config(args.config, merged)


def sibling(path: str | Path, suffix: str) -> Path:
    """`out/model.ckpt` + ".history.csv" -> `out/model.history.csv`."""
    path = Path(path)
    return path.with_name(path.stem + suffix)


def echo_config(config: RunConfig, path: str | Path) -> Path:
    """Writes the effective run config as JSON so the run can be repeated exactly."""
    ReportRepository(path).save(run_config_to_dict(config))
    return Path(path)


def load_corpus(path: str | Path) -> list[CorpusRecord]:
    return CorpusRepository(path).load()


def prepare_splits(records: list[CorpusRecord], task: TaskSpec, data: DataConfig, seed: int) -> Splits:
    """Optional balanced subset of the whole corpus, then train/validation/test."""
    if data.subset is not None:
        records = balanced_subset(records, task, data.subset, seed)
        logger.info(f"Using a balanced subset of {len(records)} records")
    return split_dataset(records, task, data.validation_fraction, seed)
