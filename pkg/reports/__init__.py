# reports/__init__.py

"""
Human-readable artifacts: SVG heatmaps, metric tables and run summaries.
"""

from .heatmap import HeatmapSpec, heatmap_panels_svg, heatmap_svg, ramp, render_heatmap, render_heatmap_panels
from .summary import render_run_summary, write_run_summary
from .tables import render_comparison_table, render_metric_table

__all__ = [
    "HeatmapSpec",
    "heatmap_panels_svg",
    "heatmap_svg",
    "ramp",
    "render_comparison_table",
    "render_heatmap",
    "render_heatmap_panels",
    "render_metric_table",
    "render_run_summary",
    "write_run_summary",
]
