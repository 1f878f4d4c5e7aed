# commands/score_heads_cmd.py

"""
score_heads_cmd.py – `score-heads` Subcommand

Scores every attention head of a checkpoint on one split and writes the
importance grid CSV (plus its `.meta.json` sidecar).
"""

from __future__ import annotations

import argparse

from config import RunConfig
from figprune_db import CheckpointRepository, ImportanceRepository
from pruning import ImportanceGrid, score_heads
from training import Checkpoint
from utils.corpus import CorpusRecord, encode_split
from .common import FORMATTER, echo_config, load_corpus, prepare_splits, run_config, sibling


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "score-heads", parents=parents, formatter_class=FORMATTER,
        help="score attention heads by loss sensitivity",
        description="Compute the mean absolute loss gradient of every head output over one split.",
    )
    parser.add_argument("--checkpoint", required=True, help="trained checkpoint")
    parser.add_argument("--corpus", required=True, help="corpus TSV the checkpoint was trained on")
    parser.add_argument("--out", default="importance.csv", help="grid CSV path")
    parser.add_argument("--split", choices=("train", "validation", "test"), default=None, help="config: prune.score_split")
    parser.add_argument("--reduction", choices=("mean", "sum"), default=None, help="config: prune.reduction")
    parser.set_defaults(handler=score_heads_cmd)


def grid_for(checkpoint: Checkpoint, records: list[CorpusRecord], config: RunConfig) -> ImportanceGrid:
    """Scores `checkpoint` on the configured split, re-deriving splits with the checkpoint's seed."""
    task = checkpoint.task
    splits = prepare_splits(records, task, config.data, checkpoint.train_config.seed)
    split = config.prune.score_split
    data = encode_split(splits.by_name(split), checkpoint.vocab, checkpoint.model_config.max_len, task)
    return score_heads(
        checkpoint.to_model(), data, task,
        source_split=split,
        reduction=config.prune.reduction,
        batch_size=checkpoint.train_config.batch_size,
    )


def score_heads_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{"prune.score_split": args.split, "prune.reduction": args.reduction})
    checkpoint = CheckpointRepository(args.checkpoint).load()
    grid = grid_for(checkpoint, load_corpus(args.corpus), config)
    ImportanceRepository(args.out).save(grid)
    echo_config(config, sibling(args.out, ".config.json"))
    return 0
