"""Log levels, pipeline categories and the LogEntry record."""

from dataclasses import dataclass, field
from datetime import UTC, datetime
from enum import Enum
from typing import Any


class Level(str, Enum):
    """Уровни в порядке возрастания важности."""

    TRACE = "trace"
    DEBUG = "debug"
    INFO = "info"
    WARN = "warn"  # грязные строки, пустые группы, отброшенные события
    ERROR = "error"

    @property
    def rank(self) -> int:
        return _RANKS[self]


_RANKS: dict[Level, int] = {lvl: i for i, lvl in enumerate(Level)}


class Category(str, Enum):
    """Этап пайплайна, к которому относится запись."""

    INGEST = "ingest"
    PREPROCESS = "preprocess"  # сессии, stays, активные пользователи
    RELEVANCE = "relevance"
    CLASSIFICATION = "classification"  # Head/Tail breaks
    ANALYTICS = "analytics"  # CCDF, композиция, K-means, pause time
    SYNTH = "synth"
    PIPELINE = "pipeline"
    REPORT = "report"
    CLI = "cli"
    CONFIG = "config"


@dataclass
class LogEntry:
    """One emitted record; writers decide how it is rendered."""

    timestamp: datetime
    service_name: str
    instance_id: str
    environment: str
    level: Level
    message: str
    ingestion_time: datetime = field(default_factory=lambda: datetime.now(UTC))
    category: Category | None = None
    run_id: str | None = None
    function_name: str | None = None
    file_path: str | None = None
    line_number: int | None = None
    error_message: str | None = None
    stack_trace: str | None = None
    context: dict[str, Any] | None = None
    duration_ms: int | None = None


@dataclass(frozen=True)
class Field:
    key: str
    value: Any


def category(cat: Category) -> Field:
    """Переопределяет категорию для одной записи."""
    return Field("_category", cat)


def param(key: str, value: Any) -> Field:
    return Field(key, value)


def duration_ms(value: int) -> Field:
    """Попадает в LogEntry.duration_ms, а не в context."""
    return Field("duration_ms", value)
