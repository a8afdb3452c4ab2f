"""
Tests for logging configuration - structured logging with structlog.
"""

import pytest
import json
import logging
import tempfile
import shutil
from pathlib import Path


class TestLoggingConfig:
    """Test suite for logging configuration."""

    @pytest.fixture
    def temp_log_dir(self):
        """Create a temporary directory for log files."""
        log_dir = tempfile.mkdtemp()
        yield log_dir
        shutil.rmtree(log_dir, ignore_errors=True)

    @pytest.fixture
    def logger_config(self, temp_log_dir):
        """Create a logger configuration and undo it afterwards."""
        from src.logging.config import LoggerConfig
        config = LoggerConfig(log_dir=temp_log_dir)
        yield config
        config.reset()

    def _read_log(self, log_dir):
        for handler in logging.getLogger().handlers:
            handler.flush()
        log_files = list(Path(log_dir).glob("application.log"))
        assert len(log_files) == 1
        return log_files[0].read_text()

    def test_create_logger_config(self, temp_log_dir):
        """Test that LoggerConfig can be instantiated."""
        from src.logging.config import LoggerConfig
        config = LoggerConfig(log_dir=temp_log_dir)
        assert config.log_dir == temp_log_dir

    def test_file_output_creates_application_log(self, logger_config, temp_log_dir):
        """Test that file output writes to application.log."""
        logger = logger_config.setup(level="INFO", console_output=False, file_output=True)
        logger.info("test_message", extra_field="test_value")

        assert "test_message" in self._read_log(temp_log_dir)

    def test_no_file_without_file_output(self, logger_config, temp_log_dir):
        """Console-only setup leaves the log directory empty."""
        logger = logger_config.setup(level="INFO", console_output=False)
        logger.info("nowhere")

        assert list(Path(temp_log_dir).glob("*.log")) == []

    def test_json_output_format(self, logger_config, temp_log_dir):
        """Test that logs are output as JSON lines."""
        logger = logger_config.setup(level="INFO", json_output=True, console_output=False, file_output=True)
        logger.info("json_test_message", test_field="test_value")

        lines = [line for line in self._read_log(temp_log_dir).splitlines() if line]
        last_log = json.loads(lines[-1])
        assert last_log['event'] == "json_test_message"
        assert last_log['test_field'] == "test_value"
        assert 'timestamp' in last_log
        assert last_log['level'] == "info"

    def test_log_level_filtering(self, logger_config, temp_log_dir):
        """Only messages at or above the level are written."""
        logger = logger_config.setup(level="WARNING", console_output=False, file_output=True)
        logger.info("info_message_filtered")
        logger.warning("warning_message_visible")

        content = self._read_log(temp_log_dir)
        assert "info_message_filtered" not in content
        assert "warning_message_visible" in content

    def test_custom_processors_run_first(self, logger_config, temp_log_dir):
        """Custom processors can add fields to every event."""
        def add_origin(logger, name, event_dict):
            event_dict['origin'] = 'etalg-test'
            return event_dict

        logger = logger_config.setup(level="INFO", json_output=True, console_output=False,
                                     file_output=True, processors=[add_origin])
        logger.info("with_origin")

        last_log = json.loads(self._read_log(temp_log_dir).splitlines()[-1])
        assert last_log['origin'] == 'etalg-test'

    def test_run_logger_writes_separate_file(self, logger_config, temp_log_dir):
        """Each run gets its own log file with the run id bound."""
        logger_config.setup(level="INFO", json_output=True, console_output=False)
        first = logger_config.get_run_logger("run_aaa")
        second = logger_config.get_run_logger("run_bbb")
        first.info("first_run_message")
        second.info("second_run_message")
        for run_id in ("run_aaa", "run_bbb"):
            for handler in logging.getLogger(f"run.{run_id}").handlers:
                handler.flush()

        first_content = (Path(temp_log_dir) / "runs" / "run_aaa.log").read_text()
        assert "first_run_message" in first_content
        assert "second_run_message" not in first_content
        assert json.loads(first_content.splitlines()[-1])['run_id'] == "run_aaa"

    def test_run_logger_is_cached(self, logger_config):
        """Asking twice for the same run returns the same logger."""
        logger_config.setup(console_output=False)
        assert logger_config.get_run_logger("run_x") is logger_config.get_run_logger("run_x")

    def test_exception_logging(self, logger_config, temp_log_dir):
        """Exceptions are rendered with their type and message."""
        logger = logger_config.setup(level="INFO", json_output=True, console_output=False, file_output=True)
        try:
            raise ValueError("Test exception")
        except ValueError:
            logger.exception("error_occurred")

        content = self._read_log(temp_log_dir)
        assert "error_occurred" in content
        assert "ValueError" in content

    def test_reset_removes_handlers(self, logger_config):
        """reset() leaves no root handlers behind."""
        logger_config.setup(console_output=True)
        assert logging.getLogger().handlers
        logger_config.reset()
        assert logging.getLogger().handlers == []

    def test_from_settings(self, temp_log_dir):
        """from_settings honours the level override and the log directory."""
        from src.config import Settings
        from src.logging.config import LoggerConfig

        settings = Settings(log_dir=temp_log_dir, log_level="ERROR")
        config = LoggerConfig.from_settings(settings, level="DEBUG")
        try:
            assert config.log_dir == temp_log_dir
            assert logging.getLogger().level == logging.DEBUG
        finally:
            config.reset()


class TestSettings:
    """Settings resolution from defaults and ETALG_* variables."""

    def test_defaults(self, monkeypatch):
        from src.config import load_settings
        for name in ("ETALG_MAX_BUDGET", "ETALG_LOG_LEVEL", "ETALG_JSON_LOGS", "ETALG_DELTA_HALVINGS"):
            monkeypatch.delenv(name, raising=False)

        settings = load_settings(env_file="/nonexistent/.env")
        assert settings.max_budget == 10000
        assert settings.delta_halvings == 20
        assert settings.selftest['ktheory_cases'] == 500

    def test_environment_overrides(self, monkeypatch):
        from src.config import load_settings
        monkeypatch.setenv("ETALG_MAX_BUDGET", "77")
        monkeypatch.setenv("ETALG_JSON_LOGS", "yes")
        monkeypatch.setenv("ETALG_LOG_LEVEL", "DEBUG")

        settings = load_settings(env_file="/nonexistent/.env")
        assert settings.max_budget == 77
        assert settings.json_logs is True
        assert settings.log_level == "DEBUG"

    def test_env_file(self, monkeypatch):
        from src.config import load_settings
        monkeypatch.delenv("ETALG_DELTA_HALVINGS", raising=False)
        with tempfile.NamedTemporaryFile('w', suffix='.env', delete=False) as f:
            f.write("ETALG_DELTA_HALVINGS=5\n")
            path = f.name
        try:
            assert load_settings(env_file=path).delta_halvings == 5
        finally:
            import os
            os.unlink(path)
            os.environ.pop("ETALG_DELTA_HALVINGS", None)
