"""Environment settings and run logging."""

import json

import pytest

import runner
from chebdyn.config import Settings, load_settings
from utils.step_logger import StepLogger


class TestSettings:
    def test_from_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("CHEBDYN_THREADS", "3")
        monkeypatch.setenv("CHEBDYN_STEP_LOGGING", "TRUE")
        settings = load_settings()
        assert settings.threads == 3 and settings.worker_count() == 3
        assert settings.step_logging
        assert settings.log_dir == str(tmp_path / "Logs")

    def test_defaults(self, monkeypatch):
        for name in ("CHEBDYN_THREADS", "CHEBDYN_STEP_LOGGING", "CHEBDYN_LOG_DIR"):
            monkeypatch.delenv(name, raising=False)
        settings = load_settings()
        assert settings == Settings()
        assert settings.worker_count() >= 1

    @pytest.mark.parametrize("raw", ["many", "-1"])
    def test_bad_thread_count(self, monkeypatch, raw):
        monkeypatch.setenv("CHEBDYN_THREADS", raw)
        with pytest.raises(ValueError):
            load_settings()

    def test_bad_thread_count_exits_with_usage(self, monkeypatch):
        monkeypatch.setenv("CHEBDYN_THREADS", "many")
        assert runner.main(["profile", "--n", "2"]) == runner.EXIT_USAGE


class TestStepLogger:
    def test_disabled_writes_nothing(self, tmp_path):
        logger = StepLogger("verify", enabled=False, log_dir=str(tmp_path))
        logger.log_step_start("census_n1", {"n": 1})
        logger.log_step_complete({"verdict": "pass"})
        logger.log_final_output([])
        assert not logger.is_logging_enabled()
        assert list(tmp_path.iterdir()) == []

    def test_step_files(self, tmp_path):
        logger = StepLogger("verify", enabled=True, log_dir=str(tmp_path))
        logger.log_step_start("census_n1", {"n": 1})
        logger.log_step_complete({"verdict": "pass"}, metadata={"verdict": "pass"})
        logger.log_final_output([{"verdict": "pass"}, {"verdict": "fail"}])

        step = logger.base_dir / "step_01_census_n1"
        assert json.loads((step / "input.json").read_text()) == {"n": 1}
        metadata = json.loads((step / "metadata.json").read_text())
        assert metadata["step_name"] == "census_n1" and metadata["verdict"] == "pass"
        summary = (logger.base_dir / "final_output" / "summary.md").read_text()
        assert "- fail: 1" in summary and "- pass: 1" in summary

    def test_unserialisable_values_fall_back_to_str(self, tmp_path):
        logger = StepLogger("analyze", enabled=True, log_dir=str(tmp_path))
        logger.log_step_start("build_map", {"z": 1 + 2j})
        assert json.loads((logger.current_step_dir / "input.json").read_text()) == {"z": "(1+2j)"}

    def test_enabled_from_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("CHEBDYN_STEP_LOGGING", "true")
        logger = StepLogger("render_n2")
        assert logger.is_logging_enabled()
        assert logger.base_dir.parent == tmp_path / "Logs" / "render_n2"
