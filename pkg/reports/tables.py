# reports/tables.py

"""
tables.py – Plain-Text Metric Tables

Aligned text tables in the row order Precision, Recall, F1-Score, Accuracy,
Macro Avg Precision/Recall, Weighted Avg Precision/Recall, values at two
decimals. Full-precision values stay in the JSON reports.
"""

from __future__ import annotations

from typing import Sequence

from config import REPORT_ROWS
from utils.metrics import EvalReport


def _align(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for k, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_metric_table(report: EvalReport, heading: str = "Value") -> str:
    """One column of metrics for a single model."""
    rows = [["Metric", heading]]
    rows += [[label, f"{getattr(report, attr):.2f}"] for label, attr in REPORT_ROWS]
    return _align(rows)


def render_comparison_table(
    groups: Sequence[tuple[str, EvalReport, EvalReport]],
    show_deltas: bool = False,
) -> str:
    """
    Original-vs-pruned columns for one or more tasks.

    Args:
        groups: (task name, original report, pruned report) per task, in column order.
        show_deltas: Add a signed `pruned - original` column after each group.
    """
    header = ["Metric"]
    for name, _, _ in groups:
        header += [f"{name} Original", f"{name} Pruned"]
        if show_deltas:
            header.append(f"{name} Delta")
    rows = [header]
    for label, attr in REPORT_ROWS:
        row = [label]
        for _, original, pruned in groups:
            before, after = getattr(original, attr), getattr(pruned, attr)
            row += [f"{before:.2f}", f"{after:.2f}"]
            if show_deltas:
                row.append(f"{after - before:+.2f}")
        rows.append(row)
    return _align(rows)
