"""Tests for configuration management."""

from pathlib import Path
import tempfile

import pytest
from pydantic import ValidationError

from hitcurve.config import EvalSettings, RunConfig, parse_se_methods
from hitcurve.metrics import SEMethod


def test_default_settings():
    """Test default settings values."""
    settings = EvalSettings()

    assert settings.label_col == "label"
    assert settings.bootstrap == 5000
    assert settings.seed == 0
    assert settings.se_methods == ["asymptotic"]
    assert settings.output_format == "json"


def test_save_and_load():
    """Test saving and loading settings."""
    with tempfile.TemporaryDirectory() as tmpdir:
        config_path = Path(tmpdir) / "hitcurve.yaml"

        settings1 = EvalSettings(label_col="disease", bootstrap=200)
        settings1.save(config_path)

        settings2 = EvalSettings.load(config_path)
        assert settings2.label_col == "disease"
        assert settings2.bootstrap == 200


def test_load_missing_file(tmp_path: Path):
    """A missing file gives default settings."""
    assert EvalSettings.load(tmp_path / "absent.yaml") == EvalSettings()


def test_environment_overrides(monkeypatch):
    """HITCURVE_* environment variables set defaults."""
    monkeypatch.setenv("HITCURVE_SEED", "42")
    monkeypatch.setenv("HITCURVE_OUTPUT_FORMAT", "csv")

    settings = EvalSettings()

    assert settings.seed == 42
    assert settings.output_format == "csv"


def test_merge_overrides():
    """Test merging overrides."""
    settings = EvalSettings()
    new_settings = settings.merge_overrides(bootstrap=100, seed=None)

    assert new_settings.bootstrap == 100
    assert new_settings.seed == 0
    # Original should be unchanged
    assert settings.bootstrap == 5000


def test_parse_se_methods():
    """Short and full method names parse, duplicates collapse."""
    assert parse_se_methods("asymptotic,npboot") == [SEMethod.ASYMPTOTIC, SEMethod.NONPARAMETRIC]
    assert parse_se_methods(["pboot", "pboot"]) == [SEMethod.PARAMETRIC]
    assert parse_se_methods(["parametric-bootstrap"]) == [SEMethod.PARAMETRIC]
    with pytest.raises(ValueError, match="unknown SE method"):
        parse_se_methods("jackknife")


def test_run_config_flags_win():
    """Flags override settings unless they are None."""
    settings = EvalSettings(seed=3, bootstrap=100)

    config = RunConfig.from_settings("metrics", settings, seed=9, bootstrap=None, se_methods="pboot")

    assert config.seed == 9
    assert config.bootstrap == 100
    assert config.se_methods == [SEMethod.PARAMETRIC]


def test_run_config_validation():
    """Bootstrap size, inflation factors and seed are validated."""
    with pytest.raises(ValidationError, match="B >= 2"):
        RunConfig(command="metrics", bootstrap=1, se_methods="npboot")
    with pytest.raises(ValidationError):
        RunConfig(command="inflate", inflate=[0])
    with pytest.raises(ValidationError):
        RunConfig(command="metrics", seed=-1)

    # B is irrelevant without a bootstrap method
    assert RunConfig(command="metrics", bootstrap=1, se_methods="asymptotic").bootstrap == 1


def test_settings_split_method_string():
    """A comma-separated method string becomes a list."""
    assert EvalSettings(se_methods="pboot, npboot").se_methods == ["pboot", "npboot"]


def test_run_config_merges_through_settings(monkeypatch):
    """from_settings applies shared flags with merge_overrides and keeps the rest."""
    calls = []
    original = EvalSettings.merge_overrides

    def spy(self, **overrides):
        calls.append(overrides)
        return original(self, **overrides)

    monkeypatch.setattr(EvalSettings, "merge_overrides", spy)
    settings = EvalSettings(label_col="disease")

    config = RunConfig.from_settings(
        "rank", settings, seed=4, label_col=None, score_cols=["a"], output=None
    )

    assert calls == [{"seed": 4, "label_col": None}]
    assert config.seed == 4
    assert config.label_col == "disease"
    assert config.score_cols == ["a"]
    assert config.output is None
