"""
Tests for correlation context and progress tracking.
"""

import pytest
import time


class TestCorrelationContext:
    """Test suite for run correlation ids."""

    def test_create_correlation_context(self):
        """Test that CorrelationContext keeps the given ids."""
        from src.logging.correlation import CorrelationContext
        context = CorrelationContext(run_id="test_run_123", command="ktheory", seed=7)
        assert context.run_id == "test_run_123"
        assert context.bindings() == {'run_id': "test_run_123", 'command': "ktheory", 'seed': 7}

    def test_auto_generated_run_id(self):
        """Test automatic run_id generation if not provided."""
        from src.logging.correlation import CorrelationContext
        first, second = CorrelationContext(), CorrelationContext()
        assert first.run_id.startswith("run_")
        assert first.run_id != second.run_id

    def test_context_binds_contextvars(self):
        """Inside the block the ids are bound; afterwards they are gone."""
        import structlog
        from src.logging.correlation import CorrelationContext

        with CorrelationContext(run_id="ctx_test_456", command="selftest"):
            bound = structlog.contextvars.get_contextvars()
            assert bound['run_id'] == "ctx_test_456"
            assert bound['command'] == "selftest"
        assert structlog.contextvars.get_contextvars() == {}

    def test_stage_binding(self):
        """stage() binds the stage index only inside its block."""
        import structlog
        from src.logging.correlation import CorrelationContext

        with CorrelationContext(run_id="staged") as ctx:
            with ctx.stage(3):
                assert structlog.contextvars.get_contextvars()['stage'] == 3
            assert 'stage' not in structlog.contextvars.get_contextvars()
            assert structlog.contextvars.get_contextvars()['run_id'] == "staged"

    def test_stage_unbinds_on_error(self):
        import structlog
        from src.logging.correlation import CorrelationContext

        with CorrelationContext() as ctx:
            with pytest.raises(RuntimeError):
                with ctx.stage(1):
                    raise RuntimeError("boom")
            assert 'stage' not in structlog.contextvars.get_contextvars()


class TestProgressTracker:
    """Test suite for progress tracking."""

    def test_advance_counts(self):
        from src.logging.progress import ProgressTracker

        tracker = ProgressTracker(total=10, description="cases")
        tracker.advance()
        tracker.advance(ok=False)
        tracker.advance(amount=3)

        assert tracker.done == 5
        assert tracker.failed == 1
        assert tracker.passed == 4
        assert tracker.percentage == 50.0

    def test_zero_total(self):
        """Test progress tracker with zero total (edge case)."""
        from src.logging.progress import ProgressTracker
        tracker = ProgressTracker(total=0)
        assert tracker.percentage == 0.0
        assert tracker.is_complete()

    def test_percentage_capped(self):
        from src.logging.progress import ProgressTracker
        tracker = ProgressTracker(total=2)
        tracker.advance(amount=5)
        assert tracker.percentage == 100.0

    def test_bar(self):
        from src.logging.progress import ProgressTracker
        tracker = ProgressTracker(total=100, bar_width=20, description="bar")
        tracker.advance(amount=50)

        bar = tracker.bar()
        assert '█' * 10 in bar
        assert '50.0%' in bar
        assert bar.startswith("[bar]")
        assert str(tracker) == bar

    def test_eta(self):
        from src.logging.progress import ProgressTracker
        tracker = ProgressTracker(total=10)
        assert tracker.eta_seconds() is None
        time.sleep(0.01)
        tracker.advance()
        assert tracker.eta_seconds() > 0

    def test_callback(self):
        """The callback receives the summary after every update."""
        from src.logging.progress import ProgressTracker

        seen = []
        tracker = ProgressTracker(total=4, callback=seen.append)
        tracker.advance()
        tracker.advance(ok=False)

        assert [s['done'] for s in seen] == [1, 2]
        assert seen[-1]['failed'] == 1

    def test_context_manager_logs_completion(self):
        """Leaving the block emits progress_complete with the summary."""
        from structlog.testing import capture_logs
        from src.logging.progress import ProgressTracker

        with capture_logs() as logs:
            with ProgressTracker(total=3, description="ctx") as tracker:
                for _ in range(3):
                    tracker.advance()

        events = [entry['event'] for entry in logs]
        assert events.count("progress_update") == 3
        assert events[-1] == "progress_complete"
        assert logs[-1]['passed'] == 3

    def test_log_every(self):
        from structlog.testing import capture_logs
        from src.logging.progress import ProgressTracker

        with capture_logs() as logs:
            tracker = ProgressTracker(total=10, log_every=5)
            for _ in range(10):
                tracker.advance()

        assert [entry['done'] for entry in logs] == [5, 10]

    def test_summary(self):
        from src.logging.progress import ProgressTracker
        tracker = ProgressTracker(total=100, description="Summary test")
        tracker.advance(amount=60)
        tracker.advance(ok=False, amount=5)

        summary = tracker.get_summary()
        assert summary['total'] == 100
        assert summary['done'] == 65
        assert summary['passed'] == 60
        assert summary['failed'] == 5
        assert summary['percentage'] == 65.0
        assert 'elapsed_seconds' in summary
        assert summary['is_complete'] is False
