import dataclasses
import json
import math

import numpy as np
import pytest

from config import CHECKPOINT_FORMAT_VERSION, TrainConfig
from conftest import TINY
from figprune_db import CheckpointRepository
from figprune_db.repositories.checkpoint import HEADER
from model import FigurativeClassifier, HeadMask
from training import AdamWState, EarlyStopping, Trainer, adamw_step, evaluate, mean_loss, train
from utils.autodiff import no_grad
from utils.corpus import corpus_fingerprint, encode_split, split_dataset
from utils.errors import TrainingError, TruncatedCheckpointError, UsageError, VersionMismatchError
from utils.tokenizer import build_vocab


def fit_tiny(records, task, train_config):
    splits = split_dataset(records, task, 0.25, seed=0)
    vocab = build_vocab((r["sentence"] for r in splits.train + splits.validation), TINY.vocab_size)
    config = dataclasses.replace(TINY, vocab_size=len(vocab))
    model = FigurativeClassifier(config, seed=3)
    train_data = encode_split(splits.train, vocab, config.max_len, task)
    val_data = encode_split(splits.validation, vocab, config.max_len, task)
    checkpoint, history = train(model, train_data, val_data, train_config, vocab, task, corpus_fingerprint(records))
    return checkpoint, history, val_data


@pytest.fixture
def trained(synthetic_records, idiom_task, tiny_train_config):
    return fit_tiny(synthetic_records, idiom_task, tiny_train_config)


# ── AdamW ───────────────────────────────────────────────────

def test_zero_gradient_applies_pure_decay():
    config = TrainConfig(learning_rate=0.1, weight_decay=0.5)
    params, state = adamw_step({"w": np.array([1.0, -2.0])}, {"w": np.zeros(2)}, AdamWState(), config)
    assert np.allclose(params["w"], [0.95, -1.9], rtol=0, atol=1e-15)
    assert state.step == 1


def test_first_step_moves_by_learning_rate():
    config = TrainConfig(learning_rate=0.01, weight_decay=0.0)
    params, _ = adamw_step({"w": np.array(1.0)}, {"w": np.array(1.0)}, AdamWState(), config)
    assert float(params["w"]) == pytest.approx(1.0 - 0.01 / (1.0 + 1e-8), abs=1e-15)


def test_step_leaves_inputs_untouched():
    w = np.array([0.5, 0.5])
    state = AdamWState()
    adamw_step({"w": w}, {"w": np.array([1.0, -1.0])}, state, TrainConfig())
    assert np.array_equal(w, [0.5, 0.5])
    assert state.step == 0 and not state.m


def test_non_finite_gradient_names_the_parameter():
    with pytest.raises(TrainingError, match="encoder.embed"):
        adamw_step({"encoder.embed": np.ones(2)}, {"encoder.embed": np.array([1.0, np.nan])}, AdamWState(), TrainConfig())


# ── early stopping ──────────────────────────────────────────

def test_early_stopping_counts_plateau_epochs():
    stopper = EarlyStopping(patience=2)
    assert stopper.update(1, 1.0)
    assert not stopper.update(2, 1.0)
    assert not stopper.should_stop
    assert not stopper.update(3, 1.0 - 1e-9)
    assert stopper.should_stop and stopper.best_epoch == 1


class ScriptedTrainer(Trainer):
    """Replays fixed validation losses; each epoch writes its number into the output bias."""

    def __init__(self, model, config, losses):
        super().__init__(model, config)
        self.losses = losses

    def run_epoch(self, epoch, data):
        self.model.output.bias.data[...] = float(epoch)
        return 0.0

    def validate(self, epoch, data):
        return self.losses[epoch - 1], 0.5


def test_plateau_stops_after_patience_and_restores_best_epoch(synthetic_records, idiom_task):
    vocab = build_vocab((r["sentence"] for r in synthetic_records), TINY.vocab_size)
    data = encode_split(synthetic_records[:4], vocab, TINY.max_len, idiom_task)
    model = FigurativeClassifier(TINY, seed=0)
    trainer = ScriptedTrainer(model, TrainConfig(max_epochs=20, patience=10), [1.0, 0.5] + [0.5] * 18)
    result = trainer.fit(data, data)
    assert len(result.history) == 12
    assert result.best_epoch == 2
    assert result.stopped_early
    assert np.array_equal(model.output.bias.data, [2.0])


def test_improving_losses_run_every_epoch(synthetic_records, idiom_task):
    vocab = build_vocab((r["sentence"] for r in synthetic_records), TINY.vocab_size)
    data = encode_split(synthetic_records[:4], vocab, TINY.max_len, idiom_task)
    model = FigurativeClassifier(TINY, seed=0)
    trainer = ScriptedTrainer(model, TrainConfig(max_epochs=20, patience=10), [1.0 / e for e in range(1, 21)])
    result = trainer.fit(data, data)
    assert [r.epoch for r in result.history] == list(range(1, 21))
    assert result.best_epoch == 20
    assert not result.stopped_early


def test_fit_rejects_empty_splits(tiny_model, tiny_train_config, synthetic_records, idiom_task):
    vocab = build_vocab((r["sentence"] for r in synthetic_records), TINY.vocab_size)
    data = encode_split(synthetic_records[:4], vocab, TINY.max_len, idiom_task)
    empty = encode_split([], vocab, TINY.max_len, idiom_task)
    with pytest.raises(UsageError):
        Trainer(tiny_model, tiny_train_config).fit(data, empty)


# ── full training and checkpoints ───────────────────────────

def test_training_history_is_finite(trained):
    _, history, _ = trained
    assert len(history) >= 1
    assert all(math.isfinite(r.train_loss) and math.isfinite(r.val_loss) for r in history)


def test_checkpoint_holds_best_epoch(trained):
    checkpoint, history, val_data = trained
    best = min(history, key=lambda r: r.val_loss)
    assert checkpoint.metadata.epoch == best.epoch
    loss, _ = mean_loss(checkpoint.to_model(), val_data, batch_size=4)
    assert loss == pytest.approx(best.val_loss, abs=1e-12)


def test_evaluate_counts_every_example(trained, idiom_task):
    checkpoint, _, val_data = trained
    report = evaluate(checkpoint.to_model(), val_data, idiom_task)
    counts = report.counts
    assert counts.tp + counts.fp + counts.tn + counts.fn == len(val_data)


def test_checkpoint_round_trip_reproduces_logits(trained, tmp_path):
    checkpoint, _, val_data = trained
    repo = CheckpointRepository(tmp_path / "model.ckpt")
    repo.save(checkpoint)
    restored = repo.load()
    with no_grad():
        before = checkpoint.to_model()(val_data.ids, val_data.pad_mask).logits.data
        after = restored.to_model()(val_data.ids, val_data.pad_mask).logits.data
    assert np.array_equal(before, after)
    assert restored.vocab == checkpoint.vocab
    assert restored.train_config == checkpoint.train_config


def test_corrupt_payload_is_detected(trained, tmp_path):
    path = tmp_path / "model.ckpt"
    CheckpointRepository(path).save(trained[0])
    raw = bytearray(path.read_bytes())
    raw[-1] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(TruncatedCheckpointError):
        CheckpointRepository(path).load()


def test_cut_file_is_detected(trained, tmp_path):
    path = tmp_path / "model.ckpt"
    CheckpointRepository(path).save(trained[0])
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(TruncatedCheckpointError):
        CheckpointRepository(path).load()


def test_other_format_version_is_rejected(trained, tmp_path):
    path = tmp_path / "model.ckpt"
    CheckpointRepository(path).save(trained[0])
    raw = path.read_bytes()
    (length,) = HEADER.unpack_from(raw)
    manifest = json.loads(raw[HEADER.size:HEADER.size + length])
    manifest["format_version"] = CHECKPOINT_FORMAT_VERSION + 1
    encoded = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
    path.write_bytes(HEADER.pack(len(encoded)) + encoded + raw[HEADER.size + length:])
    with pytest.raises(VersionMismatchError):
        CheckpointRepository(path).load()


def test_pruned_model_reloads_pruned(trained, tmp_path):
    checkpoint, _, _ = trained
    gates = np.ones((TINY.n_layers, TINY.n_heads))
    gates[0, 1] = 0.0
    pruned = checkpoint.with_model(checkpoint.to_model().with_head_mask(HeadMask(gates)))
    repo = CheckpointRepository(tmp_path / "pruned.ckpt")
    repo.save(pruned)
    model = repo.load().to_model()
    assert model.head_mask.pruned_heads() == [(0, 1)]


def test_same_seeds_give_identical_checkpoint_bytes(synthetic_records, idiom_task, tiny_train_config, tmp_path):
    first, second = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    CheckpointRepository(first).save(fit_tiny(synthetic_records, idiom_task, tiny_train_config)[0])
    CheckpointRepository(second).save(fit_tiny(synthetic_records, idiom_task, tiny_train_config)[0])
    assert first.read_bytes() == second.read_bytes()
