# commands/gen_data_cmd.py

"""
gen_data_cmd.py – `gen-data` Subcommand

Writes a synthetic figurative-marker corpus as TSV.
"""

from __future__ import annotations

import argparse
import logging

from figprune_db import CorpusRepository
from utils.corpus import make_synthetic_corpus
from .common import FORMATTER, echo_config, run_config, sibling

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "gen-data", parents=parents, formatter_class=FORMATTER,
        help="generate a synthetic marker corpus",
        description="Generate a labelled synthetic corpus with planted idiom and metaphor markers.",
    )
    parser.add_argument("--n", type=int, default=None, help="number of sentences, even (config: data.n)")
    parser.add_argument("--marker-rate", type=float, default=None, help="share of sentences carrying each marker (config: data.marker_rate)")
    parser.add_argument("--out", default="corpus.tsv", help="output TSV path")
    parser.set_defaults(handler=gen_data_cmd)


def gen_data_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{"data.n": args.n, "data.marker_rate": args.marker_rate})
    records = make_synthetic_corpus(config.data.n, config.data.marker_rate, config.seed)
    CorpusRepository(args.out).save(records)
    echo_config(config, sibling(args.out, ".config.json"))
    return 0
