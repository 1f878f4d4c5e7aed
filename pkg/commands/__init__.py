# commands/__init__.py

"""
Initializes the 'commands' package. Each module registers one CLI subcommand
and exposes its handler.
"""

from . import (
    compare_cmd,
    eval_cmd,
    gen_data_cmd,
    heatmap_cmd,
    inspect_data_cmd,
    prune_cmd,
    run_cmd,
    score_heads_cmd,
    summary_cmd,
    sweep_cmd,
    train_cmd,
)

# Registration order is the order `--help` lists the subcommands in.
COMMAND_MODULES = (
    gen_data_cmd,
    inspect_data_cmd,
    train_cmd,
    score_heads_cmd,
    prune_cmd,
    eval_cmd,
    compare_cmd,
    heatmap_cmd,
    sweep_cmd,
    summary_cmd,
    run_cmd,
)

__all__ = ["COMMAND_MODULES"]
