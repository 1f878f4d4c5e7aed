# commands/eval_cmd.py

"""
eval_cmd.py – `eval` Subcommand

Evaluates one checkpoint on a corpus split and prints the metric table.
"""

from __future__ import annotations

import argparse

from figprune_db import CheckpointRepository, ReportRepository
from reports import render_metric_table
from training import evaluate
from utils.corpus import encode_split
from .common import FORMATTER, echo_config, load_corpus, prepare_splits, run_config, sibling

SPLITS = ("train", "validation", "test")


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "eval", parents=parents, formatter_class=FORMATTER,
        help="evaluate a checkpoint",
        description="Evaluate a checkpoint on one split and print precision, recall, F1, accuracy and averages.",
    )
    parser.add_argument("--checkpoint", required=True, help="checkpoint to evaluate")
    parser.add_argument("--corpus", required=True, help="corpus TSV")
    parser.add_argument("--split", choices=SPLITS, default="test", help="split to evaluate on")
    parser.add_argument("--out", default=None, help="optional JSON report path; the config echo is written beside it")
    parser.set_defaults(handler=eval_cmd)


def eval_cmd(args: argparse.Namespace) -> int:
    config = run_config(args)
    checkpoint = CheckpointRepository(args.checkpoint).load()
    task = checkpoint.task
    splits = prepare_splits(load_corpus(args.corpus), task, config.data, checkpoint.train_config.seed)
    data = encode_split(splits.by_name(args.split), checkpoint.vocab, checkpoint.model_config.max_len, task)
    report = evaluate(checkpoint.to_model(), data, task, checkpoint.train_config.batch_size)
    if args.out:
        ReportRepository(args.out).save(report.to_dict())
        echo_config(config, sibling(args.out, ".config.json"))
    print(f"{task.label_column} on {args.split} ({report.n} examples)")
    print(render_metric_table(report), end="")
    return 0
