# commands/compare_cmd.py

"""
compare_cmd.py – `compare` Subcommand

Evaluates an original and a pruned checkpoint on the same split and prints
the side-by-side metric table with deltas.
"""

from __future__ import annotations

import argparse

from config import RunConfig
from figprune_db import CheckpointRepository, ReportRepository
from pruning import ComparisonReport, compare
from reports import render_comparison_table
from training import Checkpoint
from utils.corpus import CorpusRecord
from .common import FORMATTER, echo_config, load_corpus, prepare_splits, run_config, sibling
from .eval_cmd import SPLITS


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "compare", parents=parents, formatter_class=FORMATTER,
        help="compare original and pruned checkpoints",
        description="Evaluate an original and a pruned checkpoint on one split and print both metric sets.",
    )
    parser.add_argument("--original", required=True, help="unpruned checkpoint")
    parser.add_argument("--pruned", required=True, help="pruned checkpoint")
    parser.add_argument("--corpus", required=True, help="corpus TSV")
    parser.add_argument("--split", choices=SPLITS, default="test", help="split to evaluate on")
    parser.add_argument("--out", default=None, help="optional JSON comparison path; the config echo is written beside it")
    parser.set_defaults(handler=compare_cmd)


def compare_on_split(
    original: Checkpoint, pruned: Checkpoint, records: list[CorpusRecord], split: str, config: RunConfig
) -> ComparisonReport:
    splits = prepare_splits(records, original.task, config.data, original.train_config.seed)
    return compare(original, pruned, splits.by_name(split), original.task, original.train_config.batch_size)


def compare_cmd(args: argparse.Namespace) -> int:
    config = run_config(args)
    original = CheckpointRepository(args.original).load()
    pruned = CheckpointRepository(args.pruned).load()
    report = compare_on_split(original, pruned, load_corpus(args.corpus), args.split, config)
    if args.out:
        ReportRepository(args.out).save(report.to_dict())
        echo_config(config, sibling(args.out, ".config.json"))
    print(
        f"{report.task.label_column} on {args.split}: heads retained "
        f"{report.original_retained} -> {report.pruned_retained} of {report.total_heads}"
    )
    print(render_comparison_table([(report.task.label_column, report.original, report.pruned)], show_deltas=True), end="")
    return 0
