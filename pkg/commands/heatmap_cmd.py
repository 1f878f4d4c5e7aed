# commands/heatmap_cmd.py

"""
heatmap_cmd.py – `heatmap` Subcommand

Renders one or more importance grids as an SVG; several grids become panels
side by side on one shared colour scale.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from figprune_db import ImportanceRepository
from reports import HeatmapSpec, render_heatmap_panels
from .common import FORMATTER, echo_config, run_config, sibling


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "heatmap", parents=parents, formatter_class=FORMATTER,
        help="render importance heatmaps as SVG",
        description="Render importance grids as an SVG heatmap with one panel per grid.",
    )
    parser.add_argument("--grid", action="append", required=True, help="grid CSV; repeat for side-by-side panels")
    parser.add_argument("--out", default="heatmap.svg", help="SVG path")
    parser.add_argument("--color-scale", choices=("linear", "log"), default="linear", help="colour axis")
    parser.add_argument("--log-floor", type=float, default=None, help="smallest score drawn on a log scale")
    parser.add_argument("--no-annotate", action="store_true", help="omit the per-cell score text")
    parser.set_defaults(handler=heatmap_cmd)


def heatmap_cmd(args: argparse.Namespace) -> int:
    config = run_config(args)
    specs = []
    for path in args.grid:
        grid = ImportanceRepository(path).load()
        specs.append(HeatmapSpec(
            grid=grid,
            annotate=not args.no_annotate,
            color_scale=args.color_scale,
            title=f"{grid.task.label_column} ({Path(path).stem})",
            log_floor=args.log_floor,
        ))
    render_heatmap_panels(specs, args.out)
    echo_config(config, sibling(args.out, ".config.json"))
    return 0
