# commands/run_cmd.py

"""
run_cmd.py – `run` Subcommand

The whole pipeline in one output directory: corpus (generated unless given),
training, head scoring, pruning, original-vs-pruned comparison on the test
split, heatmap and run summary.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from figprune_db import (
    CheckpointRepository,
    CorpusRepository,
    HistoryRepository,
    ImportanceRepository,
    ReportRepository,
)
from pruning import prune
from reports import HeatmapSpec, render_comparison_table, render_heatmap, write_run_summary
from utils.corpus import make_synthetic_corpus
from .common import FORMATTER, add_task_argument, echo_config, load_corpus, run_config
from .compare_cmd import compare_on_split
from .score_heads_cmd import grid_for
from .train_cmd import fit_checkpoint

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "run", parents=parents, formatter_class=FORMATTER,
        help="run the full pipeline",
        description="Train, score heads, prune, compare and report in one output directory.",
    )
    parser.add_argument("--corpus", default=None, help="corpus TSV; a synthetic corpus is generated when omitted")
    parser.add_argument("--out-dir", default="run", help="output directory")
    add_task_argument(parser)
    parser.add_argument("--max-epochs", type=int, default=None, help="config: train.max_epochs")
    parser.add_argument("--threshold", type=float, default=None, help="config: prune.threshold")
    parser.set_defaults(handler=run_cmd)


def run_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{"train.max_epochs": args.max_epochs, "prune.threshold": args.threshold})
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    echo_config(config, out / "run_config.json")

    if args.corpus:
        records = load_corpus(args.corpus)
    else:
        records = make_synthetic_corpus(config.data.n, config.data.marker_rate, config.seed)
        CorpusRepository(out / "corpus.tsv").save(records)

    checkpoint, history = fit_checkpoint(records, config)
    CheckpointRepository(out / "model.ckpt").save(checkpoint)
    HistoryRepository(out / "model.history.csv").save(history)

    grid = grid_for(checkpoint, records, config)
    ImportanceRepository(out / "importance.csv").save(grid)

    pruned_model, prune_report = prune(checkpoint.to_model(), grid, config.prune.threshold, config.prune.epsilon)
    pruned = checkpoint.with_model(pruned_model)
    CheckpointRepository(out / "pruned.ckpt").save(pruned)
    ReportRepository(out / "pruned.prune.json").save(prune_report.to_dict())

    comparison = compare_on_split(checkpoint, pruned, records, "test", config)
    ReportRepository(out / "comparison.json").save(comparison.to_dict())

    task = config.task.label_column
    render_heatmap(HeatmapSpec(grid=grid, title=f"{task} head importance"), out / "heatmap.svg")
    write_run_summary(history, [(task, grid)], prune_report, [comparison], out / "summary.md", config)

    print(f"{prune_report.pruned_count} heads pruned; {prune_report.retained_count} of {prune_report.total_count} retained")
    print(render_comparison_table([(task, comparison.original, comparison.pruned)], show_deltas=True), end="")
    logger.info(f"Run artifacts written to {out}")
    return 0
