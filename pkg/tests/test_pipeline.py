"""
Test cases for the pipeline runner, settings and environment setup.
"""

import json
import logging
import operator

import pytest

import setup_environment
from config.settings import Settings, settings
from pipeline.runner import get_pipeline_config, resolve_workers, run_tasks, validate_pipeline


class TestRunTasks:
    """Inline and process-pool execution merge by key."""

    TASKS = [(("a", i), (i, 10 * i)) for i in range(12)]

    def test_inline(self):
        results = run_tasks(operator.add, self.TASKS, workers=1)
        assert results == {("a", i): 11 * i for i in range(12)}

    def test_pool_matches_inline(self, monkeypatch, caplog):
        monkeypatch.setattr("pipeline.runner.os.cpu_count", lambda: 8)
        caplog.set_level(logging.INFO, logger="pipeline.runner")
        pooled = run_tasks(operator.add, self.TASKS, workers=8)
        assert "on 8 worker processes" in caplog.text
        assert pooled == run_tasks(operator.add, self.TASKS, workers=1)

    def test_empty(self):
        assert run_tasks(operator.add, [], workers=4) == {}

    def test_errors_propagate(self):
        with pytest.raises(ZeroDivisionError):
            run_tasks(operator.truediv, [("x", (1, 0))], workers=1)


class TestWorkers:
    """Worker count resolution."""

    def test_clamped(self):
        assert resolve_workers(0) == 1
        assert resolve_workers(10**6) >= 1

    def test_capped_at_cpu_count(self, monkeypatch):
        monkeypatch.setattr("pipeline.runner.os.cpu_count", lambda: 4)
        assert resolve_workers(8) == 4
        assert resolve_workers(3) == 3
        monkeypatch.setattr("pipeline.runner.os.cpu_count", lambda: None)
        assert resolve_workers(8) == 1
        assert resolve_workers(1) == 1

    def test_default_from_settings(self):
        assert resolve_workers(None) == resolve_workers(settings.WORKERS)


class TestPipelineConfig:
    """Pipeline description and validation."""

    def test_config(self):
        config = get_pipeline_config(1)
        assert config["workers"] == 1
        assert config["artifact_version"] == settings.ARTIFACT_VERSION
        assert len(config["stages"]) > 0

    def test_validation(self):
        assert validate_pipeline(1)["is_valid"] == (not settings.validate_settings())
        invalid = validate_pipeline(0)
        assert not invalid["is_valid"]
        assert invalid["workers"] == 1


class TestSettings:
    """Environment-derived settings."""

    def test_defaults_are_valid(self):
        assert Settings.validate_settings() == []

    def test_bad_values_reported(self, monkeypatch):
        monkeypatch.setattr(Settings, "WORKERS", 0)
        monkeypatch.setattr(Settings, "LOG_LEVEL", "LOUD")
        problems = Settings.validate_settings()
        assert len(problems) == 2


class TestSetupEnvironment:
    """Files written by the setup script."""

    def test_env_file(self, tmp_path):
        path = tmp_path / ".env"
        setup_environment.create_env_file(str(path), seed=11, workers=3)
        text = path.read_text()
        assert "LARP_SEED=11" in text
        assert "LARP_WORKERS=3" in text

    def test_existing_env_backed_up(self, tmp_path):
        path = tmp_path / ".env"
        path.write_text("OLD=1\n")
        setup_environment.create_env_file(str(path), seed=1, workers=1)
        assert (tmp_path / ".env.backup").read_text() == "OLD=1\n"

    def test_default_experiment_config(self, tmp_path):
        path = tmp_path / "experiment.json"
        result = setup_environment.write_default_experiment_config(str(path))
        assert result["status"] == "success"
        data = json.loads(path.read_text())
        assert data["n"] == settings.DEFAULT_SAMPLE_SIZE
        assert sorted(data["param_grid"]) == ["quantile", "sdo", "zscore"]

    def test_check_pipeline(self):
        assert setup_environment.check_pipeline() == (not settings.validate_settings())


if __name__ == "__main__":
    # Run basic tests
    test = TestRunTasks()

    print("Testing task runner...")
    test.test_inline()
    test.test_empty()
    print("✓ Runner tests passed")

    print("\n🎉 All pipeline tests passed!")
