# commands/inspect_data_cmd.py

"""
inspect_data_cmd.py – `inspect-data` Subcommand

Prints per-split label counts of a corpus for one task.
"""

from __future__ import annotations

import argparse

import pandas as pd

from .common import FORMATTER, add_task_argument, load_corpus, run_config


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "inspect-data", parents=parents, formatter_class=FORMATTER,
        help="print label counts per split",
        description="Print the number of records per split and label for one task.",
    )
    parser.add_argument("--corpus", required=True, help="corpus TSV")
    add_task_argument(parser)
    parser.set_defaults(handler=inspect_data_cmd)


def label_counts(records: list[dict], column: str) -> pd.DataFrame:
    """Split x label count table with row and column totals; unlabelled rows count as "(none)"."""
    df = pd.DataFrame(records, columns=["split", column])
    df[column] = df[column].fillna("(none)")
    return pd.crosstab(df["split"], df[column], margins=True, margins_name="total")


def inspect_data_cmd(args: argparse.Namespace) -> int:
    config = run_config(args)
    records = load_corpus(args.corpus)
    column = config.task.label_column
    if not records:
        print(f"{args.corpus}: no records")
        return 0
    print(f"{args.corpus}: {len(records)} records, task {column!r}")
    print(label_counts(records, column).to_string())
    return 0
