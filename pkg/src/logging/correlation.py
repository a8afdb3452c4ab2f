"""
Run and stage ids bound into every structured log line.
"""

import uuid
from contextlib import contextmanager
from typing import Any, Iterator, Optional

import structlog


class CorrelationContext:
    """
    Binds a run id (plus command and seed) for the duration of a command.

    Usage:
        with CorrelationContext(command="rewrite-chain", seed=7) as ctx:
            with ctx.stage(2):
                logger.info("step")  # carries run_id, command, seed and stage
    """

    def __init__(self, run_id: Optional[str] = None, command: Optional[str] = None,
                 seed: Optional[int] = None, **extra: Any):
        self.run_id = run_id or self.new_run_id()
        self.command = command
        self.seed = seed
        self.extra = extra

    @staticmethod
    def new_run_id() -> str:
        return f"run_{uuid.uuid4().hex[:12]}"

    def bindings(self) -> dict:
        context = {'run_id': self.run_id}
        if self.command:
            context['command'] = self.command
        if self.seed is not None:
            context['seed'] = self.seed
        context.update(self.extra)
        return context

    def __enter__(self) -> 'CorrelationContext':
        structlog.contextvars.clear_contextvars()
        structlog.contextvars.bind_contextvars(**self.bindings())
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        structlog.contextvars.clear_contextvars()
        return False

    @contextmanager
    def stage(self, index: int) -> Iterator[None]:
        """Bind the chain stage index inside the block."""
        structlog.contextvars.bind_contextvars(stage=index)
        try:
            yield
        finally:
            structlog.contextvars.unbind_contextvars('stage')
