"""Shared fixtures."""

from collections.abc import Iterator

import pytest

from src.logger.logger import init_logger
from src.logger.types import Level, LogEntry
from src.synth.spec import CohortSpec, TierSpec


class MemoryWriter:
    """Collects log entries in memory."""

    def __init__(self) -> None:
        self.entries: list[LogEntry] = []

    def write(self, entry: LogEntry) -> None:
        self.entries.append(entry)

    def messages(self, level: Level | None = None) -> list[str]:
        return [e.message for e in self.entries if level is None or e.level == level]


@pytest.fixture(autouse=True)
def log_writer() -> Iterator[MemoryWriter]:
    writer = MemoryWriter()
    init_logger("htmobility-test", "test", writer, Level.DEBUG)
    yield writer


@pytest.fixture
def crisp_spec() -> CohortSpec:
    """Planted cohort whose tiers are separated well enough to be recovered exactly."""
    return CohortSpec(
        user_count=40,
        window_days=120,
        mvp=TierSpec(count=2, p_min=1.0, p_max=1.0, duration_minutes=240),
        ovp=TierSpec(count=5, p_min=0.3, p_max=0.3, duration_minutes=90),
        evp=TierSpec(count=50, p_min=0.01, p_max=0.01, duration_minutes=40),
        seed=7,
    )


@pytest.fixture
def wifi_spec() -> CohortSpec:
    """WiFi cohort with planted durations EVP < OVP < MVP and a small EVP tier."""
    return CohortSpec(
        mode="wifi",
        user_count=60,
        window_days=90,
        mvp=TierSpec(count=2, p_min=0.9, p_max=1.0, duration_minutes=240),
        ovp=TierSpec(count=4, p_min=0.25, p_max=0.35, duration_minutes=90),
        evp=TierSpec(count=10, p_min=0.03, p_max=0.06, duration_minutes=40),
        place_pool=400,
        seed=11,
    )
