"""Active-user filtering and per-user activity profiles."""

import math
from collections.abc import Sequence
from datetime import date
from typing import Literal

import polars as pl

from src.config.settings import resolve_timezone
from src.domain.events import DayWindow, Event, Stay, UserActivityProfile, local_day
from src.errors import ContractViolation
from src.ingest.log import EventLog
from src.logger.logger import get_logger
from src.logger.types import Category, param

ActiveMode = Literal["strict", "fraction"]
DTotalMode = Literal["active-days", "window-span"]


def required_days(window: DayWindow, mode: ActiveMode = "strict", fraction: float = 1.0) -> int:
    """Number of distinct active days a user needs to pass the activity filter."""
    if mode == "strict":
        return window.days
    return max(1, math.ceil(fraction * window.days - 1e-9))


def filter_active_users(
    event_log: EventLog,
    mode: ActiveMode = "strict",
    fraction: float = 1.0,
) -> EventLog:
    """
    Keep users with at least one event on every day of the window.

    All channels count equally as activity. In `fraction` mode a user needs
    activity on at least ceil(fraction * window days) days.
    """
    window = event_log.require_window()
    needed = required_days(window, mode, fraction)

    active = (
        event_log.frame.group_by("user_id")
        .agg(pl.col("day").n_unique().alias("active_days"))
        .filter(pl.col("active_days") >= needed)
        .get_column("user_id")
    )
    frame = event_log.frame.filter(pl.col("user_id").is_in(active.to_list()))

    before = event_log.user_count
    after = active.len()
    get_logger().with_category(Category.PREPROCESS).info(
        "Active-user filter applied",
        param("mode", mode),
        param("required_days", needed),
        param("users_before", before),
        param("users_after", after),
    )
    return event_log.with_frame(frame)


def visit_days(visits: Sequence[Event | Stay], timezone: str = "UTC") -> list[tuple[str, str, date]]:
    """(user_id, place_id, day) for every calendar day touched by each visit."""
    zone = resolve_timezone(timezone)
    touched: list[tuple[str, str, date]] = []
    for visit in visits:
        if isinstance(visit, Stay):
            touched.extend((visit.user_id, visit.place_id, day) for day in visit.days(zone))
        else:
            touched.append((visit.user_id, visit.place_id, local_day(visit.timestamp, zone)))
    return touched


def activity_profile(
    user_events: Sequence[Event | Stay],
    window: DayWindow,
    timezone: str = "UTC",
    d_total_mode: DTotalMode = "active-days",
) -> UserActivityProfile:
    """
    Distinct active days of one user.

    Raises:
        ContractViolation: No events, several users, or days outside the window
    """
    if not user_events:
        raise ContractViolation("activity profile needs at least one event")

    touched = visit_days(user_events, timezone)
    users = {user_id for user_id, _, _ in touched}
    if len(users) != 1:
        raise ContractViolation(f"activity profile expects one user, got {len(users)}")

    active_days = frozenset(day for _, _, day in touched)
    outside = sorted(d for d in active_days if d not in window)
    if outside:
        raise ContractViolation(
            f"user {next(iter(users))} active on {outside[0].isoformat()}, outside the window"
        )

    d_total = window.days if d_total_mode == "window-span" else len(active_days)
    return UserActivityProfile(next(iter(users)), active_days, d_total)
