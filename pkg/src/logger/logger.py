"""Структурированный logger: LogEntry на каждую запись, вывод через writer."""

import contextlib
import inspect
import os
import socket
import sys
import time
import traceback
from collections.abc import Iterator
from dataclasses import dataclass, replace
from datetime import UTC, datetime
from pathlib import Path
from typing import Any, Protocol

from src.logger.types import Category, Field, Level, LogEntry, duration_ms, param

# Кадры этих файлов пропускаются при поиске caller
_INTERNAL_FILES = frozenset({__file__, contextlib.__file__})


class EntryWriter(Protocol):
    """Anything that accepts finished log entries."""

    def write(self, entry: LogEntry) -> None: ...


@dataclass(frozen=True)
class _Scope:
    category: Category | None = None
    run_id: str | None = None
    fields: tuple[tuple[str, Any], ...] = ()


class Logger:
    """Logger с неизменяемым scope: with_* возвращают новый logger, родитель не меняется."""

    def __init__(
        self,
        service_name: str,
        environment: str,
        writer: EntryWriter | None = None,
        min_level: Level = Level.INFO,
        run_id: str | None = None,
    ) -> None:
        """
        Initialize Logger.

        Args:
            service_name: Имя сервиса
            environment: Окружение (dev, test, prod)
            writer: StreamWriter или тестовый writer; None пишет plain text в stderr
            min_level: Записи ниже этого уровня отбрасываются
            run_id: ID запуска CLI, попадает в каждую запись
        """
        self.service_name = service_name
        self.environment = environment
        self.writer = writer
        self.min_level = min_level
        self.instance_id = f"{socket.gethostname()}:{os.getpid()}"
        self._scope = _Scope(run_id=run_id)

    def trace(self, msg: str, *fields: Field) -> None:
        self._log(Level.TRACE, msg, None, fields)

    def debug(self, msg: str, *fields: Field) -> None:
        self._log(Level.DEBUG, msg, None, fields)

    def info(self, msg: str, *fields: Field) -> None:
        self._log(Level.INFO, msg, None, fields)

    def warn(self, msg: str, *fields: Field) -> None:
        self._log(Level.WARN, msg, None, fields)

    def error(self, msg: str, err: Exception | None = None, *fields: Field) -> None:
        """Log an error; the stack trace of `err` is attached."""
        self._log(Level.ERROR, msg, err, fields)

    def enabled(self, level: Level) -> bool:
        return level.rank >= self.min_level.rank

    @contextlib.contextmanager
    def timed(self, stage: str, *fields: Field) -> Iterator[None]:
        """
        Log `Stage finished` with duration_ms when the block exits normally.

        Args:
            stage: Pipeline stage name (ingest, preprocess, ...)
            fields: Extra fields for the finishing entry
        """
        started = time.perf_counter()
        yield
        elapsed = int((time.perf_counter() - started) * 1000)
        self._log(Level.INFO, "Stage finished", None, (param("stage", stage), *fields, duration_ms(elapsed)))

    def with_category(self, category: Category) -> "Logger":
        return self._bind(replace(self._scope, category=category))

    def with_run_id(self, run_id: str) -> "Logger":
        return self._bind(replace(self._scope, run_id=run_id))

    def with_fields(self, *fields: Field) -> "Logger":
        """Новый logger, который добавляет поля в context каждой записи."""
        added = tuple((f.key, f.value) for f in fields)
        return self._bind(replace(self._scope, fields=self._scope.fields + added))

    def _bind(self, scope: _Scope) -> "Logger":
        child = Logger.__new__(Logger)
        child.__dict__.update(self.__dict__)
        child._scope = scope
        return child

    def _log(self, level: Level, msg: str, err: Exception | None, fields: tuple[Field, ...]) -> None:
        if not self.enabled(level):
            return

        context: dict[str, Any] = dict(self._scope.fields)
        category = self._scope.category
        for field in fields:
            # category(...) переопределяет категорию одной записи
            if field.key == "_category" and isinstance(field.value, Category):
                category = field.value
            else:
                context[field.key] = field.value
        elapsed = context.pop("duration_ms", None)

        function_name, file_path, line_number = self._caller()
        entry = LogEntry(
            timestamp=datetime.now(UTC),
            service_name=self.service_name,
            instance_id=self.instance_id,
            environment=self.environment,
            level=level,
            message=msg,
            category=category,
            run_id=self._scope.run_id,
            function_name=function_name,
            file_path=file_path,
            line_number=line_number,
            context=context or None,
            duration_ms=int(elapsed) if elapsed is not None else None,
        )
        if err is not None:
            entry.error_message = str(err)
            entry.stack_trace = "".join(traceback.format_exception(type(err), err, err.__traceback__))
        self._emit(entry)

    def _emit(self, entry: LogEntry) -> None:
        if self.writer is None:
            name = entry.category.value if entry.category else "-"
            print(f"[{entry.level.value}] {name}: {entry.message}", file=sys.stderr)
            return
        try:
            self.writer.write(entry)
        except Exception as write_err:
            print(f"[LOGGER ERROR] Failed to write log: {write_err}", file=sys.stderr)

    @staticmethod
    def _caller() -> tuple[str | None, str | None, int | None]:
        """First frame outside the logger and contextlib: (function, src-relative path, line)."""
        frame = inspect.currentframe()
        while frame is not None and frame.f_code.co_filename in _INTERNAL_FILES:
            frame = frame.f_back
        if frame is None:
            return None, None, None

        parts = Path(frame.f_code.co_filename).parts
        path = str(Path(*parts[parts.index("src") :])) if "src" in parts else parts[-1]
        return frame.f_code.co_name, path, frame.f_lineno


# Глобальный logger instance
_global_logger: Logger | None = None


def get_logger() -> Logger:
    """Глобальный logger; до init_logger пишет warn и выше в stderr."""
    global _global_logger
    if _global_logger is None:
        from src.logger.stream_writer import StreamWriter

        _global_logger = Logger("htmobility", "dev", StreamWriter(), Level.WARN)
    return _global_logger


def init_logger(
    service_name: str,
    environment: str,
    writer: EntryWriter | None = None,
    min_level: Level = Level.INFO,
    run_id: str | None = None,
) -> Logger:
    """
    Инициализирует глобальный logger.

    Args:
        service_name: Имя сервиса
        environment: Окружение
        writer: Writer для записи логов
        min_level: Минимальный уровень записи
        run_id: ID запуска CLI

    Returns:
        Logger instance
    """
    global _global_logger
    _global_logger = Logger(service_name, environment, writer, min_level, run_id)
    return _global_logger
