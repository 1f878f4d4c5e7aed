# commands/sweep_cmd.py

"""
sweep_cmd.py – `sweep` Subcommand

Prunes a checkpoint at several thresholds and records retained heads and
metrics for each, as CSV.
"""

from __future__ import annotations

import argparse

from figprune_db import CheckpointRepository, ImportanceRepository, SweepRepository
from pruning import sweep_thresholds
from utils.corpus import encode_split
from .common import FORMATTER, echo_config, load_corpus, prepare_splits, run_config, sibling
from .eval_cmd import SPLITS


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "sweep", parents=parents, formatter_class=FORMATTER,
        help="evaluate pruning over several thresholds",
        description="Prune at each threshold and evaluate the pruned model on one split.",
    )
    parser.add_argument("--checkpoint", required=True, help="unpruned checkpoint")
    parser.add_argument("--grid", required=True, help="importance grid CSV")
    parser.add_argument("--corpus", required=True, help="corpus TSV")
    parser.add_argument("--split", choices=SPLITS, default="test", help="split to evaluate on")
    parser.add_argument("--thresholds", type=float, nargs="+", default=None, help="config: prune.sweep_thresholds")
    parser.add_argument("--out", default="sweep.csv", help="sweep CSV path")
    parser.set_defaults(handler=sweep_cmd)


def sweep_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{"prune.sweep_thresholds": args.thresholds})
    checkpoint = CheckpointRepository(args.checkpoint).load()
    grid = ImportanceRepository(args.grid).load()
    task = checkpoint.task
    splits = prepare_splits(load_corpus(args.corpus), task, config.data, checkpoint.train_config.seed)
    data = encode_split(splits.by_name(args.split), checkpoint.vocab, checkpoint.model_config.max_len, task)
    rows = sweep_thresholds(
        checkpoint.to_model(), grid, config.prune.sweep_thresholds, data, task,
        epsilon=config.prune.epsilon,
        batch_size=checkpoint.train_config.batch_size,
    )
    SweepRepository(args.out).save(rows)
    echo_config(config, sibling(args.out, ".config.json"))
    for row in rows:
        print(f"threshold {row.threshold:g}: {row.retained} retained, accuracy {row.accuracy:.2f}, F1 {row.f1:.2f}")
    return 0
