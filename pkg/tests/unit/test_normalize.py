"""Tests for event normalization and the normalized event file."""

import io
import random
from datetime import date
from pathlib import Path

import pytest

from src.domain.events import Channel, DayWindow
from src.errors import ContractViolation
from src.ingest import EventBatch, normalize, parse_raw_cdr
from src.logger.types import Level
from src.repository import DatasetRepository
from tests.conftest import MemoryWriter
from tests.factories import BASE_DAY, event


def test_sorted_and_deduplicated() -> None:
    events = [
        event("u2", "b", day=1),
        event("u1", "a", day=2),
        event("u1", "a", day=2),
        event("u1", "c", day=0, hour=8),
    ]
    log = normalize(events)

    assert len(log) == 3
    assert log.users == ["u1", "u2"]
    assert [e.place_id for e in log.events] == ["c", "a", "b"]
    assert log.window == DayWindow(BASE_DAY, date(2024, 3, 6))


def test_order_independent() -> None:
    rng = random.Random(3)
    events = [
        event(f"u{rng.randrange(5)}", f"p{rng.randrange(8)}", day=rng.randrange(10), hour=rng.randrange(24))
        for _ in range(300)
    ]
    shuffled = events[:]
    rng.shuffle(shuffled)

    assert normalize(events, "Asia/Tokyo") == normalize(shuffled + events[:50], "Asia/Tokyo")


def test_local_day_follows_timezone() -> None:
    late = event("u1", "a", day=0, hour=23)
    assert normalize([late], "UTC").window == DayWindow(BASE_DAY, BASE_DAY)
    tokyo = normalize([late], "Asia/Tokyo").require_window()
    assert tokyo.first_day == date(2024, 3, 5)


def test_explicit_window_drops_outside(log_writer: MemoryWriter) -> None:
    events = [event("u1", "a", day=d) for d in range(5)]
    window = DayWindow(date(2024, 3, 5), date(2024, 3, 6))

    log = normalize(events, window=window)

    assert len(log) == 2
    assert log.window == window
    assert log.dropped_outside_window == 3
    assert "Events outside the observation window dropped" in log_writer.messages(Level.WARN)


def test_empty_log_has_no_window() -> None:
    log = normalize(EventBatch())
    assert log.is_empty
    with pytest.raises(ContractViolation):
        log.require_window()


def test_user_events_and_visit_days() -> None:
    log = normalize([event("u1", "a", day=0, hour=h) for h in (8, 9, 10)] + [event("u2", "a")])
    assert len(log.user_events("u1")) == 3
    assert log.visit_days().height == 2
    assert log.place_count == 1


def test_written_event_file_reparses(tmp_path: Path) -> None:
    events = [
        event("u1", "a", day=0, channel=Channel.SMS),
        event("u1", "b", day=1, hour=23),
        event("u2", "a", day=1, channel=Channel.DATA),
    ]
    log = normalize(events)
    path = DatasetRepository(tmp_path).write_events(log)

    assert path.read_text().splitlines()[:2] == [
        "user_id,timestamp,place_id,channel",
        "u1,2024-03-04T12:00:00Z,a,sms",
    ]
    reparsed = normalize(parse_raw_cdr(io.BytesIO(path.read_bytes())))
    assert reparsed == log
