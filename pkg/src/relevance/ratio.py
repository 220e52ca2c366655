"""Relevance Ratio: RR(P, u) = d_visit(P, u) / d_total(u)."""

from collections import defaultdict
from collections.abc import Sequence
from datetime import date
from itertools import groupby
from operator import itemgetter

import polars as pl

from src.domain.events import DayWindow, Event, Stay, UserActivityProfile
from src.domain.relevance import RelevanceRecord, RelevanceTable, record_sort_key
from src.errors import ContractViolation
from src.ingest.log import EventLog
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.preprocess.activity import DTotalMode, visit_days

_TRIPLE_SCHEMA: dict[str, pl.DataType] = {
    "user_id": pl.String(),
    "place_id": pl.String(),
    "day": pl.Date(),
}


def relevance_table(
    user_visits: Sequence[Event | Stay],
    profile: UserActivityProfile,
    timezone: str = "UTC",
) -> RelevanceTable:
    """
    RR table of one user from their events or stays.

    d_visit counts the distinct local days with at least one visit to the
    place; a stay spanning midnight counts every day it touches.

    Raises:
        ContractViolation: No visits, or visits that do not belong to the profile
    """
    if not user_visits:
        raise ContractViolation("relevance table needs at least one event or stay")

    days_by_place: dict[str, set[date]] = defaultdict(set)
    for user_id, place_id, day in visit_days(user_visits, timezone):
        if user_id != profile.user_id:
            raise ContractViolation(f"visit of user {user_id} passed with profile of {profile.user_id}")
        if day not in profile.active_days:
            raise ContractViolation(
                f"user {user_id} visited {place_id} on {day.isoformat()}, not an active day of the profile"
            )
        days_by_place[place_id].add(day)

    records = [
        _record(profile.user_id, place_id, len(days), profile.d_total)
        for place_id, days in days_by_place.items()
    ]
    records.sort(key=record_sort_key)
    return RelevanceTable(profile.user_id, profile.d_total, tuple(records))


def _record(user_id: str, place_id: str, d_visit: int, d_total: int) -> RelevanceRecord:
    if not 1 <= d_visit <= d_total:
        raise ContractViolation(
            f"user {user_id} place {place_id}: d_visit={d_visit} outside 1..d_total={d_total}"
        )
    return RelevanceRecord(user_id, place_id, d_visit, d_total, d_visit / d_total)


def visit_day_frame(source: EventLog | Sequence[Stay], timezone: str = "UTC") -> pl.DataFrame:
    """Distinct (user_id, place_id, day) triples of an event log or a stay list."""
    if isinstance(source, EventLog):
        return source.visit_days()
    triples = visit_days(source, timezone)
    frame = pl.DataFrame(
        {
            "user_id": [t[0] for t in triples],
            "place_id": [t[1] for t in triples],
            "day": [t[2] for t in triples],
        },
        schema=_TRIPLE_SCHEMA,
    )
    return frame.unique()


def cohort_relevance(
    source: EventLog | Sequence[Stay],
    d_total_mode: DTotalMode = "active-days",
    timezone: str | None = None,
    window: DayWindow | None = None,
) -> list[RelevanceTable]:
    """
    RR tables of every user, ordered by user_id.

    Args:
        source: Preprocessed event log (CDR) or significant stays (WiFi)
        d_total_mode: active-days counts a user's distinct days, window-span
            uses the observation window length
        timezone: Day boundaries for stays (event logs carry their own)
        window: Observation window for window-span mode (defaults to the log's
            window, or the span of the stays)
    """
    if isinstance(source, EventLog):
        timezone = source.timezone
        window = window or source.window
    triples = visit_day_frame(source, timezone or "UTC")
    if triples.height == 0:
        return []

    if window is None:
        days = triples.get_column("day")
        window = DayWindow(days.min(), days.max())  # type: ignore[arg-type]

    totals = triples.group_by("user_id").agg(pl.col("day").n_unique().alias("d_total"))
    if d_total_mode == "window-span":
        totals = totals.with_columns(pl.lit(window.days, dtype=pl.Int64).alias("d_total"))

    counts = (
        triples.group_by("user_id", "place_id")
        .agg(pl.len().alias("d_visit"))
        .join(totals, on="user_id")
        .sort(["user_id", "d_visit", "place_id"], descending=[False, True, False])
    )

    tables: list[RelevanceTable] = []
    for user_id, rows in groupby(counts.iter_rows(), key=itemgetter(0)):
        records = tuple(_record(user_id, place_id, d_visit, d_total) for _, place_id, d_visit, d_total in rows)
        tables.append(RelevanceTable(user_id, records[0].d_total, records))

    get_logger().with_category(Category.RELEVANCE).info(
        "Relevance tables built",
        param("users", len(tables)),
        param("user_places", counts.height),
        param("d_total_mode", d_total_mode),
    )
    return tables
