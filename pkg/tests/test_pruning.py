import dataclasses

import numpy as np
import pytest

from config import SYNTHETIC_MARKERS, TaskSpec, TrainConfig
from conftest import TINY, random_batch
from figprune_db import ImportanceRepository
from model import FigurativeClassifier, HeadMask, bce_loss
from pruning import (
    ComparisonReport,
    ImportanceGrid,
    PruneReport,
    compare,
    layer_profile,
    prune,
    prune_mask,
    score_heads,
    sweep_thresholds,
)
from training import Checkpoint, CheckpointMetadata
from utils.autodiff import no_grad
from utils.corpus import EncodedSplit, encode_split, make_synthetic_corpus
from utils.errors import ConfigurationError, UsageError
from utils.gradcheck import numerical_gradient
from utils.tokenizer import build_vocab


def random_split(rng, n, config=TINY):
    ids, pad = random_batch(rng, n, config.max_len, config.vocab_size, min_len=2)
    labels = rng.integers(0, 2, size=n)
    return EncodedSplit(ids=ids, pad_mask=pad, labels=labels, record_ids=[f"r{i}" for i in range(n)])


def checkpoint_for(model, records):
    vocab = build_vocab((r["sentence"] for r in records), model.config.vocab_size)
    metadata = CheckpointMetadata(epoch=1, val_loss=0.5, corpus_fingerprint="")
    return Checkpoint.from_model(model, TrainConfig(), vocab, TaskSpec("idiom"), metadata)


# ── importance scores ───────────────────────────────────────

def test_head_with_zero_output_projection_scores_exactly_zero(tiny_model, idiom_task):
    tiny_model.encoder.layers[1].attention.w_o.data[0] = 0.0
    data = random_split(np.random.default_rng(0), 6)
    grid = score_heads(tiny_model, data, idiom_task, batch_size=4)
    assert grid.scores[1, 0] == 0.0
    others = np.delete(grid.scores.ravel(), 2)
    assert np.all(others > 0.0)
    assert grid.zero_count() == 1

    pruned, report = prune(tiny_model, grid)
    assert report.pruned_heads == ((1, 0),)
    with no_grad():
        before = tiny_model(data.ids, data.pad_mask).logits.data
        after = pruned(data.ids, data.pad_mask).logits.data
    assert np.array_equal(before, after)


def test_scores_match_finite_differences_of_head_outputs(idiom_task):
    config = dataclasses.replace(TINY, d_model=4, n_layers=1, n_heads=1, d_ff=8, lstm_hidden=3, lstm_layers=1)
    model = FigurativeClassifier(config, seed=8)
    rng = np.random.default_rng(9)
    ids = rng.integers(1, config.vocab_size, size=(1, 5))
    pad = np.ones_like(ids, dtype=bool)
    labels = np.array([1])
    data = EncodedSplit(ids=ids, pad_mask=pad, labels=labels, record_ids=["only"])

    grid = score_heads(model, data, idiom_task, reduction="sum")
    delta = np.zeros((1, 1, 5, config.d_head))

    def loss():
        return bce_loss(model(ids, pad, head_deltas={0: delta}).probabilities, labels, reduction="sum")

    numeric = np.abs(numerical_gradient(loss, delta)).sum()
    assert grid.scores[0, 0] == pytest.approx(numeric, rel=1e-5)


def test_mean_reduction_divides_by_real_elements(tiny_model, idiom_task):
    data = random_split(np.random.default_rng(1), 1)
    summed = score_heads(tiny_model, data, idiom_task, reduction="sum")
    averaged = score_heads(tiny_model, data, idiom_task, reduction="mean")
    elements = data.pad_mask.sum() * TINY.d_head
    assert np.allclose(averaged.scores, summed.scores / elements, rtol=1e-12, atol=0)


def test_scoring_is_deterministic_and_leaves_weights_alone(tiny_model, idiom_task):
    data = random_split(np.random.default_rng(2), 5)
    state = tiny_model.state_dict()
    first = score_heads(tiny_model, data, idiom_task, batch_size=2)
    second = score_heads(tiny_model, data, idiom_task, batch_size=2)
    assert np.array_equal(first.scores, second.scores)
    assert all(np.array_equal(state[k], v) for k, v in tiny_model.state_dict().items())
    assert first.n_examples == 5


def test_scoring_rejects_empty_data_and_unknown_reduction(tiny_model, idiom_task):
    data = random_split(np.random.default_rng(3), 2)
    with pytest.raises(UsageError):
        score_heads(tiny_model, data.batch(np.array([], dtype=int)), idiom_task)
    with pytest.raises(UsageError):
        score_heads(tiny_model, data, idiom_task, reduction="max")


def test_grid_rejects_negative_scores():
    with pytest.raises(ConfigurationError):
        ImportanceGrid(np.array([[0.1, -0.2]]), n_examples=1)


# ── pruning ─────────────────────────────────────────────────

def test_twelve_zero_heads_of_a_full_grid_are_pruned():
    scores = np.random.default_rng(4).uniform(0.1, 1.0, size=(12, 12))
    scores[np.arange(12), (np.arange(12) * 5) % 12] = 0.0
    mask = prune_mask(HeadMask.all_on(12, 12), ImportanceGrid(scores, n_examples=10), threshold=0.0)
    assert mask.retained_count == 132
    assert len(mask.pruned_heads()) == 12


def test_all_positive_scores_prune_nothing(tiny_model):
    grid = ImportanceGrid(np.full((2, 2), 1e-3), n_examples=1)
    pruned, report = prune(tiny_model, grid, threshold=0.0)
    assert report.pruned_count == 0 and report.retained_count == 4
    assert np.array_equal(pruned.head_mask.gates, tiny_model.head_mask.gates)


def test_all_zero_scores_prune_everything_and_the_model_still_runs(tiny_model):
    pruned, report = prune(tiny_model, ImportanceGrid(np.zeros((2, 2)), n_examples=1))
    assert report.retained_count == 0 and report.pruned_count == 4
    ids, pad = random_batch(np.random.default_rng(5), 3, 6, TINY.vocab_size)
    probabilities = pruned(ids, pad).probabilities.data
    assert np.all((probabilities > 0) & (probabilities < 1))


def test_epsilon_raises_the_cutoff():
    grid = ImportanceGrid(np.array([[0.0, 1e-9], [0.5, 2e-3]]), n_examples=1)
    assert prune_mask(HeadMask.all_on(2, 2), grid, 0.0).retained_count == 3
    assert prune_mask(HeadMask.all_on(2, 2), grid, 0.0, epsilon=1e-8).retained_count == 2
    assert prune_mask(HeadMask.all_on(2, 2), grid, 1e-3, epsilon=1e-8).retained_count == 2


def test_pruned_heads_stay_pruned():
    current = HeadMask(np.array([[0.0, 1.0]]))
    grid = ImportanceGrid(np.array([[0.7, 0.7]]), n_examples=1)
    assert prune_mask(current, grid, 0.0).pruned_heads() == [(0, 0)]


def test_prune_rejects_bad_arguments(tiny_model):
    grid = ImportanceGrid(np.ones((2, 2)), n_examples=1)
    with pytest.raises(UsageError):
        prune(tiny_model, grid, threshold=-0.1)
    with pytest.raises(UsageError):
        prune(tiny_model, grid, epsilon=-1.0)
    with pytest.raises(ConfigurationError):
        prune(tiny_model, ImportanceGrid(np.ones((3, 2)), n_examples=1))


def test_prune_report_dict_round_trip_and_accounting():
    report = PruneReport(threshold=0.0, epsilon=0.0, pruned_heads=((0, 1),), retained_count=3, total_count=4)
    assert PruneReport.from_dict(report.to_dict()) == report
    with pytest.raises(ConfigurationError):
        PruneReport(threshold=0.0, epsilon=0.0, pruned_heads=(), retained_count=3, total_count=4)


def test_sweep_rows_are_ascending_and_shrink(tiny_model, idiom_task):
    grid = ImportanceGrid(np.array([[0.1, 0.2], [0.3, 0.4]]), n_examples=1)
    data = random_split(np.random.default_rng(6), 8)
    rows = sweep_thresholds(tiny_model, grid, [0.25, 0.0, 0.5, 0.25], data, idiom_task, batch_size=4)
    assert [r.threshold for r in rows] == [0.0, 0.25, 0.5]
    assert [r.retained for r in rows] == [4, 2, 0]
    assert all(r.retained + r.pruned == 4 for r in rows)


def test_layer_profile_summarises_each_row():
    grid = ImportanceGrid(np.array([[0.0, 2.0], [1.0, 1.0]]), n_examples=1)
    first, second = layer_profile(grid)
    assert (first.mean, first.max, first.top_head, first.zero_heads) == (1.0, 2.0, 1, 1)
    assert (second.mean, second.top_head, second.zero_heads) == (1.0, 0, 0)


def test_grid_file_round_trip_is_byte_identical(tmp_path):
    scores = np.random.default_rng(7).random((3, 4)) / 3.0
    scores[1, 2] = 0.0
    grid = ImportanceGrid(scores, n_examples=12, task=TaskSpec("metaphor"), source_split="validation")
    first = ImportanceRepository(tmp_path / "a.csv")
    first.save(grid)
    loaded = first.load()
    assert np.array_equal(loaded.scores, scores)
    assert loaded.task == grid.task and loaded.source_split == "validation" and loaded.n_examples == 12
    second = ImportanceRepository(tmp_path / "b.csv")
    second.save(loaded)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


# ── comparison ──────────────────────────────────────────────

def test_compare_without_pruning_gives_zero_deltas(tiny_model, synthetic_records, idiom_task):
    original = checkpoint_for(tiny_model, synthetic_records)
    unpruned, _ = prune(tiny_model, ImportanceGrid(np.ones((2, 2)), n_examples=1))
    report = compare(original, original.with_model(unpruned), synthetic_records[:12], idiom_task, batch_size=4)
    assert all(value == 0.0 for value in report.deltas.values())
    assert report.original == report.pruned
    assert report.original_retained == report.pruned_retained == report.total_heads == 4


def test_compare_reports_pruned_head_counts(tiny_model, synthetic_records, idiom_task):
    original = checkpoint_for(tiny_model, synthetic_records)
    pruned_model, _ = prune(tiny_model, ImportanceGrid(np.array([[0.0, 1.0], [1.0, 1.0]]), n_examples=1))
    report = compare(original, original.with_model(pruned_model), synthetic_records[:12], idiom_task)
    assert report.pruned_retained == 3
    assert report.original.n == report.pruned.n == 12
    assert ComparisonReport.from_dict(report.to_dict()) == report


def test_compare_rejects_mismatched_checkpoints(tiny_model, synthetic_records, idiom_task):
    original = checkpoint_for(tiny_model, synthetic_records)
    other_vocab = dataclasses.replace(original, vocab=build_vocab(["zz yy"], 8))
    with pytest.raises(UsageError, match="vocabular"):
        compare(original, other_vocab, synthetic_records, idiom_task)
    with pytest.raises(UsageError, match="task"):
        compare(original, original, synthetic_records, TaskSpec("metaphor"))
    with pytest.raises(UsageError):
        compare(original, original, [], idiom_task)


def marker_head_model(records):
    """
    One layer, two heads. Head 0 attends uniformly and reads a direction only the
    idiom marker words occupy; head 1 writes nothing. Layer-norm gains keep just
    the dimension head 0 writes into, so with head 0 gated off every hidden state
    is zero and the classifier outputs a constant.
    """
    vocab = build_vocab((r["sentence"] for r in records), 200)
    config = dataclasses.replace(
        TINY, vocab_size=len(vocab), d_model=4, n_layers=1, n_heads=2, d_ff=4,
        lstm_hidden=1, lstm_layers=1, max_len=24,
    )
    model = FigurativeClassifier(config, seed=0)
    for param in model.parameters():
        param.data = np.zeros_like(param.data)

    encoder = model.encoder
    encoder.token_embedding.data[:] = [1.0, -1.0, 0.0, 0.0]
    for word in SYNTHETIC_MARKERS["idiom"]:
        encoder.token_embedding.data[vocab.id_of(word)] = [0.0, 1.0, -1.0, 0.0]
    encoder.embedding_norm.gamma.data[:] = 1.0

    layer = encoder.layers[0]
    layer.attention.w_v.data[0, 2, 0] = -1.0
    layer.attention.w_o.data[0, 0, 3] = 4.0
    layer.attention_norm.gamma.data[:] = [0.0, 0.0, 0.0, 1.0]
    layer.ffn_norm.gamma.data[:] = [0.0, 0.0, 0.0, 1.0]

    forward, backward = model.bilstm.directions[0]
    for direction in (forward, backward):
        direction.w_ih.data[3, 2] = 1.0
        direction.b.data[:] = [10.0, 0.0, 0.0, 10.0]
    model.output.weight.data[:] = 5.0
    model.output.bias.data[:] = -1.0

    metadata = CheckpointMetadata(epoch=1, val_loss=0.0, corpus_fingerprint="")
    return Checkpoint.from_model(model, TrainConfig(), vocab, TaskSpec("idiom"), metadata)


def test_pruning_the_only_informative_head_drops_to_chance(idiom_task):
    records = make_synthetic_corpus(40, 0.5, seed=1)
    original = marker_head_model(records)
    without_marker_head = original.to_model().with_head_mask(HeadMask([[0.0, 1.0]]))
    report = compare(original, original.with_model(without_marker_head), records, idiom_task)
    assert report.original.accuracy == 1.0
    assert report.pruned.accuracy == 0.5
    assert report.pruned.recall == 0.0
    assert report.deltas["accuracy"] == -0.5


def test_pruning_the_silent_head_changes_nothing(idiom_task):
    records = make_synthetic_corpus(40, 0.5, seed=1)
    original = marker_head_model(records)
    model = original.to_model()
    data = encode_split(records, original.vocab, model.config.max_len, idiom_task)

    grid = score_heads(model, data, idiom_task)
    assert grid.scores[0, 1] == 0.0 and grid.scores[0, 0] > 0.0
    pruned, prune_report = prune(model, grid)
    assert prune_report.pruned_heads == ((0, 1),)

    report = compare(original, original.with_model(pruned), records, idiom_task)
    assert report.original.accuracy == report.pruned.accuracy == 1.0
