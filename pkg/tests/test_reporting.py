import re

import numpy as np
import pytest

from config import REPORT_ROWS, RunConfig, TaskSpec
from pruning import ComparisonReport, ImportanceGrid, PruneReport
from reports import (
    HeatmapSpec,
    heatmap_panels_svg,
    heatmap_svg,
    ramp,
    render_comparison_table,
    render_heatmap,
    render_metric_table,
    render_run_summary,
    write_run_summary,
)
from training import EpochRecord
from utils.errors import ConfigurationError, UsageError
from utils.metrics import ConfusionCounts, EvalReport, metric_deltas, metrics

FILL = re.compile(r'<rect x="\d+" y="\d+" width="36" height="36" fill="(#[0-9a-f]{6})"')


def grid(scores, **kwargs):
    return ImportanceGrid(np.asarray(scores, dtype=float), n_examples=4, **kwargs)


def cell_fills(svg):
    return FILL.findall(svg)


# ── heatmaps ────────────────────────────────────────────────

def test_constant_grid_uses_the_middle_of_the_ramp():
    fills = cell_fills(heatmap_svg(HeatmapSpec(grid(np.full((2, 3), 0.7)))))
    assert fills == [ramp(0.5)] * 6


def test_full_size_grid_has_one_cell_per_head_and_labels():
    svg = heatmap_svg(HeatmapSpec(grid(np.random.default_rng(0).random((12, 12)))))
    assert svg.startswith('<?xml version="1.0"')
    assert svg.endswith("</svg>\n")
    assert len(cell_fills(svg)) == 144
    assert len(re.findall(r">L\d+</text>", svg)) == 12
    assert len(re.findall(r">H\d+</text>", svg)) == 12


def test_cells_are_annotated_to_two_decimals():
    svg = heatmap_svg(HeatmapSpec(grid([[1 / 3, 0.5]])))
    assert ">0.33</text>" in svg and ">0.50</text>" in svg
    assert ">0.33</text>" not in heatmap_svg(HeatmapSpec(grid([[1 / 3, 0.5]]), annotate=False))


def test_higher_scores_are_darker():
    fills = cell_fills(heatmap_svg(HeatmapSpec(grid([[0.0, 0.2, 0.9]]))))
    brightness = [sum(int(f[i:i + 2], 16) for i in (1, 3, 5)) for f in fills]
    assert brightness == sorted(brightness, reverse=True)
    assert fills[0] == ramp(0.0) and fills[-1] == ramp(1.0)


def test_identical_input_gives_identical_bytes(tmp_path):
    spec = HeatmapSpec(grid(np.random.default_rng(1).random((3, 4))), title="idiom <train>")
    first = render_heatmap(spec, tmp_path / "a.svg")
    second = render_heatmap(spec, tmp_path / "b.svg")
    assert first.read_bytes() == second.read_bytes()
    assert "idiom &lt;train&gt;" in first.read_text(encoding="utf-8")


def test_log_scale_needs_positive_scores_or_a_floor():
    with pytest.raises(ConfigurationError):
        HeatmapSpec(grid([[0.0, 1.0]]), color_scale="log")
    with pytest.raises(ConfigurationError):
        HeatmapSpec(grid([[0.1, 1.0]]), color_scale="log", log_floor=0.0)
    with pytest.raises(ConfigurationError):
        HeatmapSpec(grid([[0.1, 1.0]]), color_scale="sqrt")
    fills = cell_fills(heatmap_svg(HeatmapSpec(grid([[0.0, 1e-3, 1.0]]), color_scale="log", log_floor=1e-6)))
    assert fills[0] == ramp(0.0) and fills[2] == ramp(1.0)
    assert fills[1] not in (fills[0], fills[2])


def test_panels_share_one_colour_scale():
    svg = heatmap_panels_svg([HeatmapSpec(grid([[0.0, 1.0]])), HeatmapSpec(grid([[2.0, 4.0]]))])
    fills = cell_fills(svg)
    assert fills == [ramp(0.0), ramp(0.25), ramp(0.5), ramp(1.0)]


def test_panels_reject_empty_and_mixed_scales():
    with pytest.raises(UsageError):
        heatmap_panels_svg([])
    with pytest.raises(ConfigurationError):
        heatmap_panels_svg([
            HeatmapSpec(grid([[1.0]])),
            HeatmapSpec(grid([[1.0]]), color_scale="log"),
        ])


# ── tables and summary ──────────────────────────────────────

def reports_pair(task=TaskSpec("idiom")):
    original = metrics(ConfusionCounts(tp=3, fp=1, tn=3, fn=1), task)
    pruned = metrics(ConfusionCounts(tp=4, fp=1, tn=3, fn=0), task)
    return original, pruned


def test_metric_table_lists_rows_in_report_order():
    original, _ = reports_pair()
    lines = render_metric_table(original).splitlines()
    assert lines[0].split() == ["Metric", "Value"]
    assert set(lines[1]) == {"-", " "}
    assert [line.rsplit(None, 1)[0] for line in lines[2:]] == [label for label, _ in REPORT_ROWS]
    assert all(line.endswith("0.75") for line in lines[2:8])


def test_comparison_table_columns_and_deltas():
    original, pruned = reports_pair()
    table = render_comparison_table([("idiom", original, pruned)], show_deltas=True)
    lines = table.splitlines()
    assert "idiom Original" in lines[0] and "idiom Pruned" in lines[0] and "idiom Delta" in lines[0]
    accuracy = next(line for line in lines if line.startswith("Accuracy"))
    assert accuracy.split()[1:] == ["0.75", "0.88", "+0.12"]
    assert "Delta" not in render_comparison_table([("idiom", original, pruned)])


PUBLISHED_COLUMNS = {
    ("idiom", "original"): (0.87, 0.89, 0.88, 0.82, 0.78, 0.77, 0.82, 0.82),
    ("idiom", "pruned"): (0.86, 0.91, 0.88, 0.83, 0.79, 0.77, 0.82, 0.83),
    ("metaphor", "original"): (1.00, 0.75, 0.86, 0.88, 0.90, 0.88, 0.90, 0.88),
    ("metaphor", "pruned"): (0.87, 0.65, 0.74, 0.78, 0.79, 0.78, 0.79, 0.78),
}


def report_from_column(task, values):
    fields = {attr: value for (_, attr), value in zip(REPORT_ROWS, values)}
    return EvalReport(**fields, counts=ConfusionCounts(tp=1, fp=0, tn=1, fn=0), task=TaskSpec(task), n=2)


def test_pruned_metaphor_column_prints_verbatim():
    values = PUBLISHED_COLUMNS[("metaphor", "pruned")]
    lines = render_metric_table(report_from_column("metaphor", values), heading="Pruned").splitlines()[2:]
    assert [line.rsplit(None, 1)[1] for line in lines] == [f"{v:.2f}" for v in values]
    assert lines[0].split()[-1] == "0.87" and lines[3].split()[-1] == "0.78"


def test_two_task_comparison_table_reproduces_published_layout():
    groups = [
        (task, report_from_column(task, PUBLISHED_COLUMNS[(task, "original")]),
         report_from_column(task, PUBLISHED_COLUMNS[(task, "pruned")]))
        for task in ("idiom", "metaphor")
    ]
    lines = render_comparison_table(groups).splitlines()
    assert re.split(r"\s{2,}", lines[0]) == [
        "Metric", "idiom Original", "idiom Pruned", "metaphor Original", "metaphor Pruned",
    ]
    for k, ((label, _), line) in enumerate(zip(REPORT_ROWS, lines[2:])):
        cells = re.split(r"\s{2,}", line)
        assert cells[0] == label
        expected = [PUBLISHED_COLUMNS[key][k] for key in PUBLISHED_COLUMNS]
        assert cells[1:] == [f"{v:.2f}" for v in expected]


def comparison(task):
    original, pruned = reports_pair(task)
    return ComparisonReport(
        task=task, original=original, pruned=pruned, deltas=metric_deltas(original, pruned),
        original_retained=4, pruned_retained=4, total_heads=4,
    )


def test_summary_reports_an_empty_prune():
    history = [EpochRecord(1, 0.7, 0.69, 0.5), EpochRecord(2, 0.5, 0.52, 0.75)]
    report = PruneReport(threshold=0.0, epsilon=0.0, pruned_heads=(), retained_count=4, total_count=4)
    text = render_run_summary(
        history, [("idiom", grid([[0.1, 0.2], [0.3, 0.4]]))], report,
        [comparison(TaskSpec("idiom")), comparison(TaskSpec("metaphor"))],
    )
    assert text.startswith("# figprune run summary")
    assert "0 heads pruned; 4 of 4 heads retained" in text
    assert "Best epoch: 2" in text
    assert "## Layer importance (idiom)" in text
    assert "metaphor Original" in text
    assert "## Configuration" not in text


def test_summary_file_echoes_configuration(tmp_path):
    report = PruneReport(threshold=0.0, epsilon=0.0, pruned_heads=((1, 0),), retained_count=3, total_count=4)
    path = write_run_summary([], [], report, [], tmp_path / "summary.md", config=RunConfig())
    text = path.read_text(encoding="utf-8")
    assert "## Configuration" in text and "```json" in text
    assert "Pruned heads: L1 H0" in text
    assert "No training history recorded." in text
