"""
Run diagnostics capture.

Provides a DiagnosticsCollector that handles:
  - A bounded, thread-safe buffer of log records (one warning when it first drops)
  - A custom logging.Handler for integration with the package loggers
  - A context manager that attaches the handler for the duration of a run

The CLI attaches a collector to the ``moyal_lab`` logger and writes the
captured records into every JSON artifact under "diagnostics".
"""

from __future__ import annotations

import logging
import threading
from collections import deque
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Iterator

logger = logging.getLogger(__name__)


class DiagnosticsCollector:
    """Collect log records emitted during a run (thread-safe)."""

    def __init__(self, max_buffer: int = 500):
        if max_buffer < 1:
            raise ValueError(f"max_buffer must be positive, got {max_buffer}")
        self._lock = threading.Lock()
        self._buffer: deque[dict] = deque(maxlen=max_buffer)
        self.dropped = 0

    def record(self, entry: dict) -> None:
        with self._lock:
            full = len(self._buffer) == self._buffer.maxlen
            if full:
                self.dropped += 1
            self._buffer.append(entry)
            first_drop = full and self.dropped == 1
        # outside the lock: the warning re-enters record() through the handler
        if first_drop:
            logger.warning(
                "diagnostics buffer full at %d records, dropping the oldest (raise MOYAL_LAB_DIAGNOSTICS_BUFFER)",
                self._buffer.maxlen,
            )

    def records(self, min_level: int = logging.NOTSET) -> list[dict]:
        """Snapshot of buffered records at or above ``min_level``."""
        with self._lock:
            snapshot = list(self._buffer)
        return [r for r in snapshot if logging.getLevelName(r["level"]) >= min_level]

    def warnings(self) -> list[dict]:
        return self.records(logging.WARNING)

    def clear(self) -> None:
        with self._lock:
            self._buffer.clear()
            self.dropped = 0

    def get_handler(self, level: int = logging.INFO) -> logging.Handler:
        """Return a logging.Handler that feeds this collector."""
        handler = _CollectorHandler(self)
        handler.setLevel(level)
        return handler

    @contextmanager
    def attached(self, logger_name: str = "moyal_lab", level: int = logging.INFO) -> Iterator["DiagnosticsCollector"]:
        """Attach a handler to ``logger_name`` while the block runs."""
        target = logging.getLogger(logger_name)
        handler = self.get_handler(level)
        target.addHandler(handler)
        try:
            yield self
        finally:
            target.removeHandler(handler)


class _CollectorHandler(logging.Handler):
    """Logging handler that serialises records into a collector."""

    def __init__(self, collector: DiagnosticsCollector):
        super().__init__()
        self._collector = collector

    def emit(self, record: logging.LogRecord) -> None:
        try:
            entry = {
                "ts": datetime.fromtimestamp(
                    record.created, tz=timezone.utc
                ).strftime("%H:%M:%S.%f")[:-3],
                "level": record.levelname,
                "name": record.name,
                "msg": self.format(record),
            }
            self._collector.record(entry)
        except Exception:
            self.handleError(record)
