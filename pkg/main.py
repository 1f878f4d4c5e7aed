# main.py

"""
main.py – figprune Command-Line Launcher

Entry point for the figprune CLI. Builds one argparse parser with a
subcommand per pipeline step (generate or inspect data, train, score heads,
prune, evaluate, compare, render heatmaps, sweep thresholds, summarize, or
run everything), dispatches to the chosen command and maps failures to exit
codes: 0 on success, 1 for usage and data errors, 2 for internal errors.
"""

from __future__ import annotations
import argparse
import logging
import os
import sys
from typing import NoReturn, Sequence

# ───────────────────────────────────────────────────────────
# Project root on path for utils & db
# ───────────────────────────────────────────────────────────
ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)

from config import VERSION
from utils.errors import UsageError
import figprune_db  # noqa: F401  (configures logging)
from commands import COMMAND_MODULES
from commands.common import FORMATTER, config_parent

logger = logging.getLogger("figprune")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so errors share one exit path."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="figprune",
        description="Train a figurative-language classifier, score and prune its attention heads, and report.",
        formatter_class=FORMATTER,
    )
    parser.add_argument("--version", action="version", version=f"figprune {VERSION}")
    parser.add_argument(
        "--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="log level of the stderr log",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=CliParser)
    parents = [config_parent()]
    for module in COMMAND_MODULES:
        module.register(subparsers, parents)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Main entry point for the figprune CLI.

    Returns:
        int: Process exit code.
    """
    try:
        args = build_parser().parse_args(argv)
        logging.getLogger().setLevel(args.log_level)
        return args.handler(args)
    except ValueError as err:
        logger.error(f"{err}")
        return EXIT_USAGE
    except Exception as err:
        logger.error(f"Unexpected error: {err}", exc_info=True)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
