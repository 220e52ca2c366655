"""Normalization of parsed events into an EventLog."""

from collections.abc import Iterable

import polars as pl

from src.config.settings import resolve_timezone
from src.domain.events import DayWindow, Event
from src.ingest.log import EVENT_COLUMNS, SORT_COLUMNS, EventBatch, EventLog
from src.logger.logger import get_logger
from src.logger.types import Category, param


def with_local_day(frame: pl.DataFrame, timezone: str) -> pl.DataFrame:
    """Add the `day` column: calendar day of `ts` in the given timezone."""
    return frame.with_columns(
        pl.from_epoch("ts", time_unit="s")
        .dt.replace_time_zone("UTC")
        .dt.convert_time_zone(timezone)
        .dt.date()
        .alias("day")
    )


def normalize(
    events: EventBatch | Iterable[Event],
    timezone: str = "UTC",
    window: DayWindow | None = None,
) -> EventLog:
    """
    Sort, deduplicate and window a sequence of events.

    Rows are ordered by (user_id, timestamp) with place_id and channel as
    tie-breakers, so the output does not depend on input order. When `window`
    is given, events whose local day falls outside it are dropped.
    An empty input gives an EventLog whose window is None.
    """
    resolve_timezone(timezone)
    batch = events if isinstance(events, EventBatch) else EventBatch.from_events(events)

    frame = batch.frame.select(EVENT_COLUMNS).unique(maintain_order=True).sort(SORT_COLUMNS)
    frame = with_local_day(frame, timezone)

    dropped = 0
    if window is not None:
        before = frame.height
        frame = frame.filter(pl.col("day").is_between(window.first_day, window.last_day))
        dropped = before - frame.height
        if dropped:
            get_logger().with_category(Category.INGEST).warn(
                "Events outside the observation window dropped",
                param("dropped", dropped),
                param("first_day", window.first_day.isoformat()),
                param("last_day", window.last_day.isoformat()),
            )

    if frame.height == 0:
        return EventLog(frame, None, timezone, dropped)

    if window is None:
        days = frame.get_column("day")
        window = DayWindow(days.min(), days.max())  # type: ignore[arg-type]
    return EventLog(frame, window, timezone, dropped)
