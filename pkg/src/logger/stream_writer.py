"""Stream writer для логов: одна JSON-строка на запись."""

import logging
import sys
from typing import Any, TextIO

from pythonjsonlogger.json import JsonFormatter

from src.logger.types import Level, LogEntry

_STDLIB_LEVELS: dict[Level, int] = {
    Level.TRACE: logging.DEBUG,
    Level.DEBUG: logging.DEBUG,
    Level.INFO: logging.INFO,
    Level.WARN: logging.WARNING,
    Level.ERROR: logging.ERROR,
}


class StreamWriter:
    """StreamWriter рендерит LogEntry в JSON lines (по умолчанию stderr)."""

    def __init__(self, stream: TextIO | None = None, name: str = "htmobility") -> None:
        """
        Initialize StreamWriter.

        Args:
            stream: Куда писать (по умолчанию sys.stderr)
            name: Имя stdlib logger, который держит handler
        """
        self.stream = stream if stream is not None else sys.stderr
        self._closed = False

        self._handler = logging.StreamHandler(self.stream)
        self._handler.setFormatter(JsonFormatter("%(message)s"))

        # Отдельный logger на каждый writer, без propagate в root
        self._logger = logging.getLogger(f"{name}.{id(self)}")
        self._logger.handlers = [self._handler]
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False

    def write(self, entry: LogEntry) -> None:
        """Записывает одну запись."""
        if self._closed:
            return
        self._logger.log(_STDLIB_LEVELS[entry.level], entry.message, extra=self._extra(entry))

    def flush(self) -> None:
        """Принудительно сбрасывает stream."""
        self._handler.flush()

    def close(self) -> None:
        """Flush и отключение writer."""
        if self._closed:
            return
        self.flush()
        self._logger.handlers = []
        self._closed = True

    @staticmethod
    def _extra(entry: LogEntry) -> dict[str, Any]:
        data: dict[str, Any] = {
            "timestamp": entry.timestamp.isoformat(),
            "level": entry.level.value,
            "category": entry.category.value if entry.category else None,
            "service_name": entry.service_name,
            "environment": entry.environment,
            "instance_id": entry.instance_id,
        }
        if entry.run_id:
            data["run_id"] = entry.run_id
        if entry.function_name:
            data["caller"] = f"{entry.file_path}:{entry.line_number} {entry.function_name}"
        if entry.error_message:
            data["error"] = entry.error_message
        if entry.stack_trace:
            data["stack_trace"] = entry.stack_trace
        if entry.context:
            data["context"] = entry.context
        if entry.duration_ms is not None:
            data["duration_ms"] = entry.duration_ms
        return data
