# commands/prune_cmd.py

"""
prune_cmd.py – `prune` Subcommand

Gates off heads at or below the cutoff and writes the pruned checkpoint and
a JSON prune report.
"""

from __future__ import annotations

import argparse

from figprune_db import CheckpointRepository, ImportanceRepository, ReportRepository
from pruning import prune
from .common import FORMATTER, echo_config, run_config, sibling


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "prune", parents=parents, formatter_class=FORMATTER,
        help="prune low-importance heads",
        description="Gate off every head whose importance is <= max(threshold, epsilon).",
    )
    parser.add_argument("--checkpoint", required=True, help="checkpoint to prune")
    parser.add_argument("--grid", required=True, help="importance grid CSV")
    parser.add_argument("--out", default="pruned.ckpt", help="pruned checkpoint; report goes to <stem>.prune.json")
    parser.add_argument("--threshold", type=float, default=None, help="config: prune.threshold")
    parser.add_argument("--epsilon", type=float, default=None, help="config: prune.epsilon")
    parser.set_defaults(handler=prune_cmd)


def prune_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{"prune.threshold": args.threshold, "prune.epsilon": args.epsilon})
    checkpoint = CheckpointRepository(args.checkpoint).load()
    grid = ImportanceRepository(args.grid).load()
    pruned, report = prune(checkpoint.to_model(), grid, config.prune.threshold, config.prune.epsilon)
    CheckpointRepository(args.out).save(checkpoint.with_model(pruned))
    ReportRepository(sibling(args.out, ".prune.json")).save(report.to_dict())
    echo_config(config, sibling(args.out, ".config.json"))
    print(f"{report.pruned_count} heads pruned; {report.retained_count} of {report.total_count} retained")
    return 0
