"""
Structured logging setup with structlog.

Console output goes to stderr so that command output on stdout stays pure
JSON; a rotating application log and optional per-run logs live under the
configured log directory.
"""

import logging
import logging.handlers
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import structlog

from ..config import Settings


class LoggerConfig:
    """
    Logging configuration for etalg.

    Features:
    - Structured logging with JSON or console rendering
    - Rotating application log
    - Per-run log files bound to the run id
    - Custom processors ahead of the standard chain
    """

    def __init__(self, log_dir: str = "logs"):
        self.log_dir = log_dir
        self._run_loggers: Dict[str, Any] = {}
        self._configured = False

    def setup(
        self,
        level: str = "WARNING",
        json_output: bool = False,
        console_output: bool = True,
        file_output: bool = False,
        max_bytes: int = 5 * 1024 * 1024,
        backup_count: int = 3,
        processors: Optional[List[Callable]] = None
    ) -> Any:
        """
        Configure structlog and the stdlib root logger.

        Args:
            level: Log level name
            json_output: Render JSON lines instead of the console format
            console_output: Log to stderr
            file_output: Log to <log_dir>/application.log with rotation
            max_bytes: Rotation size
            backup_count: Number of rotated files kept
            processors: Extra processors run before the standard ones

        Returns:
            A structlog logger
        """
        numeric_level = getattr(logging, level.upper())

        chain: List[Callable] = list(processors or [])
        chain += [
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
        ]
        chain.append(structlog.processors.JSONRenderer() if json_output else structlog.dev.ConsoleRenderer())

        structlog.configure(
            processors=chain,
            wrapper_class=structlog.stdlib.BoundLogger,
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=True,
        )

        root = logging.getLogger()
        root.setLevel(numeric_level)
        root.handlers = []

        if console_output:
            handler = logging.StreamHandler()
            handler.setLevel(numeric_level)
            handler.setFormatter(logging.Formatter(
                '%(message)s' if json_output else '%(levelname)s %(name)s: %(message)s'
            ))
            root.addHandler(handler)

        if file_output:
            Path(self.log_dir).mkdir(parents=True, exist_ok=True)
            handler = logging.handlers.RotatingFileHandler(
                os.path.join(self.log_dir, "application.log"),
                maxBytes=max_bytes,
                backupCount=backup_count,
            )
            handler.setLevel(numeric_level)
            handler.setFormatter(logging.Formatter('%(message)s'))
            root.addHandler(handler)

        self._configured = True
        return structlog.get_logger()

    @classmethod
    def from_settings(cls, settings: Settings, level: Optional[str] = None,
                      file_output: bool = False) -> 'LoggerConfig':
        """Configure from resolved settings; `level` overrides ETALG_LOG_LEVEL."""
        config = cls(settings.log_dir)
        config.setup(level=level or settings.log_level, json_output=settings.json_logs,
                     file_output=file_output)
        return config

    def get_run_logger(self, run_id: str) -> Any:
        """
        Logger writing to <log_dir>/runs/<run_id>.log with run_id bound.

        Args:
            run_id: Run identifier from CorrelationContext
        """
        if run_id in self._run_loggers:
            return self._run_loggers[run_id]

        run_dir = Path(self.log_dir) / "runs"
        run_dir.mkdir(parents=True, exist_ok=True)
        stdlib_logger = logging.getLogger(f"run.{run_id}")
        stdlib_logger.setLevel(logging.INFO)
        stdlib_logger.propagate = False
        handler = logging.handlers.RotatingFileHandler(
            run_dir / f"{run_id}.log", maxBytes=5 * 1024 * 1024, backupCount=1
        )
        handler.setFormatter(logging.Formatter('%(message)s'))
        stdlib_logger.addHandler(handler)

        bound = structlog.get_logger(f"run.{run_id}").bind(run_id=run_id)
        self._run_loggers[run_id] = bound
        return bound

    def reset(self):
        """Undo setup(): structlog defaults, no root handlers, no run loggers."""
        structlog.reset_defaults()
        for run_id in self._run_loggers:
            for handler in logging.getLogger(f"run.{run_id}").handlers[:]:
                handler.close()
                logging.getLogger(f"run.{run_id}").removeHandler(handler)
        self._run_loggers = {}
        root = logging.getLogger()
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)
        self._configured = False
