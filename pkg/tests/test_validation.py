import dataclasses
import json

import pytest

from config import CONFIG_ENV_VAR, PROFILES, ModelConfig, PruneConfig, RunConfig, TrainConfig
from utils.core import load_run_config, run_config_to_dict
from utils.errors import ConfigurationError, UsageError
from utils.validation import validate_model_config, validate_prune_config, validate_train_config


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


def write_config(tmp_path, data):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_desk_profile_is_the_default():
    config = load_run_config()
    assert config.profile == "desk"
    assert config.model.d_model == PROFILES["desk"]["model"]["d_model"]
    assert config.train.learning_rate == 1e-3


def test_paper_profile_uses_the_full_architecture():
    config = load_run_config(overrides={"profile": "paper"})
    assert (config.model.n_layers, config.model.n_heads, config.model.d_model) == (12, 12, 768)
    assert config.model.lstm_hidden == 128
    assert config.train.learning_rate == 2e-5
    assert config.train.max_epochs == 20 and config.train.patience == 10


def test_overrides_beat_file_and_file_beats_profile(tmp_path):
    path = write_config(tmp_path, {"train": {"batch_size": 8, "max_epochs": 5, "patience": 2}})
    config = load_run_config(path, {"train.batch_size": 4, "train.max_epochs": None})
    assert config.train.batch_size == 4
    assert config.train.max_epochs == 5
    assert config.train.learning_rate == 1e-3


def test_config_path_falls_back_to_environment(tmp_path, monkeypatch):
    path = write_config(tmp_path, {"prune": {"threshold": 0.01}})
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert load_run_config().prune.threshold == 0.01


def test_seed_override_reaches_training():
    config = load_run_config(overrides={"seed": 123})
    assert config.seed == 123 and config.train.seed == 123


def test_integers_become_floats_and_lists_become_tuples(tmp_path):
    path = write_config(tmp_path, {"prune": {"threshold": 0, "sweep_thresholds": [0, 0.5]}})
    config = load_run_config(path)
    assert isinstance(config.prune.threshold, float)
    assert config.prune.sweep_thresholds == (0, 0.5)


@pytest.mark.parametrize("overrides, field", [
    ({"train.patience": 50}, "train.patience"),
    ({"model.n_heads": 5}, "model.d_model"),
    ({"prune.threshold": -1.0}, "prune.threshold"),
    ({"data.subset": 3}, "data.subset"),
    ({"task.label_column": "sarcasm"}, "task.label_column"),
    ({"profile": "huge"}, "profile"),
])
def test_invalid_values_name_the_field(overrides, field):
    with pytest.raises(ConfigurationError, match=f"^{field}:"):
        load_run_config(overrides=overrides)


def test_unknown_fields_are_rejected(tmp_path):
    with pytest.raises(ConfigurationError, match="train.momentum"):
        load_run_config(overrides={"train.momentum": 0.9})
    with pytest.raises(ConfigurationError, match="optimizer"):
        load_run_config(write_config(tmp_path, {"optimizer": {}}))


def test_unreadable_config_file_is_a_usage_error(tmp_path):
    with pytest.raises(UsageError, match="not found"):
        load_run_config(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(UsageError, match="not valid JSON"):
        load_run_config(bad)


def test_section_validators():
    validate_model_config(ModelConfig())
    with pytest.raises(ConfigurationError, match="model.dropout_rate"):
        validate_model_config(dataclasses.replace(ModelConfig(), dropout_rate=1.0))
    with pytest.raises(ConfigurationError, match="train.learning_rate"):
        validate_train_config(dataclasses.replace(TrainConfig(), learning_rate=0.0))
    with pytest.raises(ConfigurationError, match="prune.reduction"):
        validate_prune_config(dataclasses.replace(PruneConfig(), reduction="max"))


def test_config_dict_is_json_ready():
    data = run_config_to_dict(RunConfig())
    assert json.loads(json.dumps(data)) == data
    assert isinstance(data["prune"]["sweep_thresholds"], list)
