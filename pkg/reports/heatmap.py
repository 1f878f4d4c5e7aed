# reports/heatmap.py

"""
heatmap.py – Importance Heatmaps as Standalone SVG

Renders an L x H importance grid as an SVG 1.1 document: one rect per head,
layer 0 in the top row, heads left to right, fill on a light-to-dark ramp
between the lowest and highest score. Output is built from integer
coordinates and fixed-format numbers only, so identical input gives identical
bytes on every platform.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence
from xml.sax.saxutils import escape

import numpy as np

from config import HEATMAP_HIGH_RGB, HEATMAP_LOW_RGB
from figprune_db.base import BaseRepository
from pruning.importance import ImportanceGrid
from utils.errors import ConfigurationError, UsageError

logger = logging.getLogger(__name__)

CELL = 36
LABEL_WIDTH = 40
TITLE_HEIGHT = 28
HEADER_HEIGHT = 18
PANEL_GAP = 24
MARGIN = 8
FONT = "font-family=\"Helvetica, Arial, sans-serif\""


@dataclass(frozen=True)
class HeatmapSpec:
    """
    What to draw.

    Attributes:
        grid (ImportanceGrid): Scores to draw.
        annotate (bool): Print each score to 2 decimals inside its cell.
        color_scale (str): "linear" or "log" (log10 of the score).
        title (str): Caption above the grid.
        log_floor (float | None): Scores below it are drawn as the floor on a log scale.
    """
    grid: ImportanceGrid
    annotate: bool = True
    color_scale: Literal["linear", "log"] = "linear"
    title: str = ""
    log_floor: float | None = None

    def __post_init__(self) -> None:
        if self.color_scale not in ("linear", "log"):
            raise ConfigurationError(f"color_scale must be 'linear' or 'log', got {self.color_scale!r}")
        if self.color_scale == "log":
            if self.log_floor is not None and self.log_floor <= 0:
                raise ConfigurationError(f"log_floor must be positive, got {self.log_floor}")
            if self.log_floor is None and (self.grid.scores <= 0).any():
                raise ConfigurationError("log color scale needs all scores positive or a log_floor")

    def scaled(self) -> np.ndarray:
        """Scores on the colour axis (identity or log10)."""
        if self.color_scale == "linear":
            return self.grid.scores
        floor = self.log_floor if self.log_floor is not None else 0.0
        return np.log10(np.maximum(self.grid.scores, floor))


def ramp(t: float) -> str:
    """Hex colour at fraction t in [0, 1] of the ramp."""
    channels = (round(lo + t * (hi - lo)) for lo, hi in zip(HEATMAP_LOW_RGB, HEATMAP_HIGH_RGB))
    return "#" + "".join(f"{c:02x}" for c in channels)


def _fraction(value: float, low: float, high: float) -> float:
    if high == low:
        return 0.5
    return (value - low) / (high - low)


def _panel_size(grid: ImportanceGrid) -> tuple[int, int]:
    n_layers, n_heads = grid.shape
    return LABEL_WIDTH + n_heads * CELL, TITLE_HEIGHT + HEADER_HEIGHT + n_layers * CELL


def _panel(spec: HeatmapSpec, x0: int, y0: int, low: float, high: float) -> list[str]:
    n_layers, n_heads = spec.grid.shape
    scaled = spec.scaled()
    grid_x = x0 + LABEL_WIDTH
    grid_y = y0 + TITLE_HEIGHT + HEADER_HEIGHT
    lines = []
    if spec.title:
        lines.append(
            f'<text x="{grid_x}" y="{y0 + 18}" {FONT} font-size="14" font-weight="bold">{escape(spec.title)}</text>'
        )
    for head in range(n_heads):
        cx = grid_x + head * CELL + CELL // 2
        lines.append(
            f'<text x="{cx}" y="{grid_y - 5}" {FONT} font-size="11" text-anchor="middle">H{head}</text>'
        )
    for layer in range(n_layers):
        y = grid_y + layer * CELL
        lines.append(
            f'<text x="{grid_x - 6}" y="{y + CELL // 2 + 4}" {FONT} font-size="11" text-anchor="end">L{layer}</text>'
        )
        for head in range(n_heads):
            x = grid_x + head * CELL
            t = _fraction(float(scaled[layer, head]), low, high)
            lines.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{ramp(t)}" '
                f'stroke="#ffffff" stroke-width="1"><title>L{layer} H{head}: '
                f'{float(spec.grid.scores[layer, head])!r}</title></rect>'
            )
            if spec.annotate:
                colour = "#ffffff" if t > 0.5 else "#222222"
                lines.append(
                    f'<text x="{x + CELL // 2}" y="{y + CELL // 2 + 4}" {FONT} font-size="10" '
                    f'text-anchor="middle" fill="{colour}">{spec.grid.scores[layer, head]:.2f}</text>'
                )
    return lines


def heatmap_panels_svg(specs: Sequence[HeatmapSpec]) -> str:
    """
    SVG text with one panel per spec, side by side, on one shared colour scale.

    Raises:
        UsageError: If `specs` is empty.
        ConfigurationError: If the specs mix linear and log scales.
    """
    if not specs:
        raise UsageError("need at least one heatmap to render")
    if len({s.color_scale for s in specs}) > 1:
        raise ConfigurationError("panels sharing a colour scale must use the same color_scale")
    low = min(float(s.scaled().min()) for s in specs)
    high = max(float(s.scaled().max()) for s in specs)
    if not (math.isfinite(low) and math.isfinite(high)):
        raise ConfigurationError("heatmap scores must be finite on the chosen colour scale")

    body: list[str] = []
    x = MARGIN
    height = 0
    for spec in specs:
        width, panel_height = _panel_size(spec.grid)
        body.extend(_panel(spec, x, MARGIN, low, high))
        x += width + PANEL_GAP
        height = max(height, panel_height)
    total_width = x - PANEL_GAP + MARGIN
    total_height = height + 2 * MARGIN
    header = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_width}" '
        f'height="{total_height}" viewBox="0 0 {total_width} {total_height}">',
        f'<rect x="0" y="0" width="{total_width}" height="{total_height}" fill="#ffffff"/>',
    ]
    return "\n".join(header + body + ["</svg>"]) + "\n"


def heatmap_svg(spec: HeatmapSpec) -> str:
    return heatmap_panels_svg([spec])


def render_heatmap(spec: HeatmapSpec, path: str | Path) -> Path:
    """Writes one heatmap to `path` (raises OSError when it cannot be written)."""
    BaseRepository(path).write_text(heatmap_svg(spec))
    logger.info(f"Wrote heatmap to {path}")
    return Path(path)


def render_heatmap_panels(specs: Sequence[HeatmapSpec], path: str | Path) -> Path:
    """Writes several grids as panels of one SVG sharing a colour scale."""
    BaseRepository(path).write_text(heatmap_panels_svg(specs))
    logger.info(f"Wrote {len(specs)}-panel heatmap to {path}")
    return Path(path)
