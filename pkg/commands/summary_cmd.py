# commands/summary_cmd.py

"""
summary_cmd.py – `summary` Subcommand

Assembles a run summary from artifacts written by earlier subcommands.
"""

from __future__ import annotations

import argparse

from figprune_db import HistoryRepository, ImportanceRepository, ReportRepository
from pruning import ComparisonReport, PruneReport
from reports import write_run_summary
from .common import FORMATTER, echo_config, run_config, sibling


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "summary", parents=parents, formatter_class=FORMATTER,
        help="write a Markdown run summary",
        description="Combine history, grids, prune report and comparisons into one Markdown document.",
    )
    parser.add_argument("--history", required=True, help="history CSV written by train")
    parser.add_argument("--grid", action="append", required=True, help="grid CSV; repeatable")
    parser.add_argument("--prune-report", required=True, help="prune report JSON written by prune")
    parser.add_argument("--comparison", action="append", default=[], help="comparison JSON written by compare --out; repeatable")
    parser.add_argument("--out", default="summary.md", help="summary path")
    parser.set_defaults(handler=summary_cmd)


def summary_cmd(args: argparse.Namespace) -> int:
    config = run_config(args)
    grids = []
    for path in args.grid:
        grid = ImportanceRepository(path).load()
        grids.append((grid.task.label_column, grid))
    write_run_summary(
        history=HistoryRepository(args.history).load(),
        grids=grids,
        prune_report=PruneReport.from_dict(ReportRepository(args.prune_report).load()),
        comparisons=[ComparisonReport.from_dict(ReportRepository(p).load()) for p in args.comparison],
        path=args.out,
        config=config,
    )
    echo_config(config, sibling(args.out, ".config.json"))
    return 0
