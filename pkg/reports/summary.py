# reports/summary.py

"""
summary.py – Run Summary Document

Collects one run's artifacts into a single Markdown-formatted text file:
the configuration echo, the training curve, the pruning accounting, the
per-layer importance profile and the original-vs-pruned comparison table.
Every number is printed with a fixed format, so identical inputs give
identical bytes.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Sequence

from config import RunConfig
from figprune_db.base import BaseRepository
from pruning.compare import ComparisonReport
from pruning.importance import ImportanceGrid, layer_profile
from pruning.pruner import PruneReport
from training.trainer import EpochRecord
from utils.core import run_config_to_dict
from .tables import render_comparison_table

logger = logging.getLogger(__name__)


def _markdown_table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(" --- " for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return lines


def _training_section(history: Sequence[EpochRecord]) -> list[str]:
    lines = ["## Training", ""]
    if not history:
        return lines + ["No training history recorded.", ""]
    best = min(history, key=lambda r: (r.val_loss, r.epoch))
    lines += _markdown_table(
        ["Epoch", "Train loss", "Val loss", "Val accuracy"],
        [
            [str(r.epoch), f"{r.train_loss:.4f}", f"{r.val_loss:.4f}", f"{r.val_accuracy:.4f}"]
            for r in history
        ],
    )
    lines += ["", f"Best epoch: {best.epoch} (val loss {best.val_loss:.4f}) of {len(history)} run.", ""]
    return lines


def _pruning_section(report: PruneReport) -> list[str]:
    lines = [
        "## Head pruning",
        "",
        f"{report.pruned_count} heads pruned; {report.retained_count} of {report.total_count} heads retained "
        f"(threshold {report.threshold:g}, epsilon {report.epsilon:g}).",
        "",
    ]
    if report.pruned_heads:
        lines += ["Pruned heads: " + ", ".join(f"L{l} H{h}" for l, h in report.pruned_heads), ""]
    return lines


def _profile_section(grids: Sequence[tuple[str, ImportanceGrid]], epsilon: float) -> list[str]:
    lines: list[str] = []
    for name, grid in grids:
        lines += [f"## Layer importance ({name})", ""]
        lines += _markdown_table(
            ["Layer", "Mean", "Max", "Top head", "Zero heads"],
            [
                [f"L{p.layer}", f"{p.mean:.6f}", f"{p.max:.6f}", f"H{p.top_head}", str(p.zero_heads)]
                for p in layer_profile(grid, epsilon)
            ],
        )
        lines += ["", f"Scored on {grid.n_examples} {grid.source_split} examples ({grid.reduction} reduction).", ""]
    return lines


def render_run_summary(
    history: Sequence[EpochRecord],
    grids: Sequence[tuple[str, ImportanceGrid]],
    prune_report: PruneReport,
    comparisons: Sequence[ComparisonReport],
    config: RunConfig | None = None,
) -> str:
    """
    Summary text of one run.

    Args:
        history: Per-epoch training records.
        grids: (task name, grid) pairs; one layer profile is printed per grid.
        prune_report: Accounting of the prune that produced the pruned model.
        comparisons: One original-vs-pruned report per task; rendered as one table.
        config: Run configuration to echo, if known.
    """
    lines = ["# figprune run summary", ""]
    if config is not None:
        lines += ["## Configuration", "", "```json"]
        lines += json.dumps(run_config_to_dict(config), indent=2, sort_keys=True).splitlines()
        lines += ["```", ""]
    lines += _training_section(history)
    lines += _pruning_section(prune_report)
    lines += _profile_section(grids, prune_report.epsilon)
    if comparisons:
        lines += ["## Original vs pruned", "", "```"]
        lines += render_comparison_table(
            [(c.task.label_column, c.original, c.pruned) for c in comparisons], show_deltas=True
        ).splitlines()
        lines += ["```", ""]
        for c in comparisons:
            lines.append(
                f"- {c.task.label_column}: {c.original.n} examples, heads retained "
                f"{c.original_retained} -> {c.pruned_retained} of {c.total_heads}"
            )
        lines.append("")
    return "\n".join(lines)


def write_run_summary(
    history: Sequence[EpochRecord],
    grids: Sequence[tuple[str, ImportanceGrid]],
    prune_report: PruneReport,
    comparisons: Sequence[ComparisonReport],
    path: str | Path,
    config: RunConfig | None = None,
) -> Path:
    """Writes `render_run_summary(...)` to `path`."""
    BaseRepository(path).write_text(render_run_summary(history, grids, prune_report, comparisons, config))
    logger.info(f"Wrote run summary to {path}")
    return Path(path)
