"""
Progress of long loops (self-test cases, chain stages) with ETA and a text bar.
"""

import time
from typing import Any, Callable, Dict, Optional

import structlog


class ProgressTracker:
    """
    Counts passed and failed items out of a known total.

    Features:
    - Percentage and ETA from the observed rate
    - Text progress bar
    - Optional callback on every update
    - progress_update / progress_complete structured log events
    """

    def __init__(
        self,
        total: int,
        description: str = "",
        bar_width: int = 30,
        callback: Optional[Callable[[Dict[str, Any]], None]] = None,
        logger: Optional[Any] = None,
        log_every: int = 1,
    ):
        """
        Args:
            total: Number of items
            description: Label shown in the bar and the log events
            bar_width: Bar width in characters
            callback: Called with get_summary() after every update
            logger: structlog logger (defaults to structlog.get_logger())
            log_every: Emit progress_update every this many items
        """
        self.total = total
        self.description = description
        self.bar_width = bar_width
        self.callback = callback
        self.logger = logger or structlog.get_logger()
        self.log_every = max(1, log_every)

        self.done = 0
        self.failed = 0
        self.started = time.monotonic()

    @property
    def passed(self) -> int:
        return self.done - self.failed

    @property
    def percentage(self) -> float:
        if self.total <= 0:
            return 0.0
        return min(100.0, 100.0 * self.done / self.total)

    def advance(self, ok: bool = True, amount: int = 1):
        """Record `amount` finished items, all passed or all failed."""
        self.done += amount
        if not ok:
            self.failed += amount
        if self.callback:
            self.callback(self.get_summary())
        if self.done % self.log_every == 0 or self.is_complete():
            self.logger.info(
                "progress_update",
                description=self.description,
                done=self.done,
                total=self.total,
                failed=self.failed,
                percentage=round(self.percentage, 1),
            )

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def eta_seconds(self) -> Optional[float]:
        """Remaining seconds at the current rate, or None before the first item."""
        elapsed = self.elapsed()
        if self.done == 0 or elapsed <= 0:
            return None
        return (self.total - self.done) * elapsed / self.done

    def bar(self) -> str:
        filled = int(self.bar_width * self.done / max(self.total, 1))
        text = f"{'█' * filled}{'░' * (self.bar_width - filled)} {self.percentage:.1f}% ({self.done}/{self.total})"
        return f"[{self.description}] {text}" if self.description else text

    def is_complete(self) -> bool:
        return self.done >= self.total

    def get_summary(self) -> Dict[str, Any]:
        summary = {
            'description': self.description,
            'total': self.total,
            'done': self.done,
            'passed': self.passed,
            'failed': self.failed,
            'percentage': round(self.percentage, 2),
            'elapsed_seconds': round(self.elapsed(), 3),
            'is_complete': self.is_complete(),
        }
        eta = self.eta_seconds()
        if eta is not None:
            summary['eta_seconds'] = round(eta, 3)
        return summary

    def __enter__(self) -> 'ProgressTracker':
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.logger.info("progress_complete", **self.get_summary())
        return False

    def __str__(self) -> str:
        return self.bar()
