"""Event-level domain model: observations, associations, stays, day windows."""

from dataclasses import dataclass, field
from datetime import UTC, date, datetime, timedelta
from enum import StrEnum
from zoneinfo import ZoneInfo


class Channel(StrEnum):
    """Where an observation came from."""

    CALL = "call"
    SMS = "sms"
    DATA = "data"
    WIFI = "wifi"


CDR_CHANNELS: frozenset[Channel] = frozenset({Channel.CALL, Channel.SMS, Channel.DATA})


class AssocKind(StrEnum):
    """WiFi association log record kind."""

    ASSOC = "assoc"
    DISASSOC = "disassoc"


def utc_from_epoch(seconds: int) -> datetime:
    """Epoch seconds to an aware UTC datetime."""
    return datetime.fromtimestamp(seconds, tz=UTC)


def epoch_seconds(instant: datetime) -> int:
    """Aware datetime to integer epoch seconds."""
    return int(instant.timestamp())


def local_day(instant: datetime, zone: ZoneInfo) -> date:
    """Calendar day of an instant in the given timezone."""
    return instant.astimezone(zone).date()


@dataclass(frozen=True, slots=True)
class Event:
    """One observation of a user at a place."""

    user_id: str
    place_id: str
    timestamp: datetime
    channel: Channel


@dataclass(frozen=True, slots=True)
class AssocEvent:
    """One association or disassociation of a device with an access point."""

    user_id: str
    ap_id: str
    timestamp: datetime
    kind: AssocKind


@dataclass(frozen=True, slots=True)
class DayWindow:
    """Inclusive range of calendar days covered by a log."""

    first_day: date
    last_day: date

    def __post_init__(self) -> None:
        if self.last_day < self.first_day:
            raise ValueError(f"window ends ({self.last_day}) before it starts ({self.first_day})")

    @property
    def days(self) -> int:
        """Window length in calendar days."""
        return (self.last_day - self.first_day).days + 1

    def __contains__(self, day: object) -> bool:
        return isinstance(day, date) and self.first_day <= day <= self.last_day

    def end_instant(self, zone: ZoneInfo) -> datetime:
        """First instant after the window (local midnight after last_day), in UTC."""
        following = self.last_day + timedelta(days=1)
        return datetime(following.year, following.month, following.day, tzinfo=zone).astimezone(UTC)


@dataclass(frozen=True, slots=True)
class Stay:
    """A contiguous presence interval of a user at a WiFi access point.

    `open_ended` marks sessions that had no disassociation and were closed at
    the end of the observation window.
    """

    user_id: str
    place_id: str
    start: datetime
    end: datetime
    open_ended: bool = False

    @property
    def duration(self) -> int:
        """Stay length in seconds."""
        return int((self.end - self.start).total_seconds())

    def days(self, zone: ZoneInfo) -> list[date]:
        """Local calendar days touched by [start, end)."""
        first = local_day(self.start, zone)
        last = local_day(self.end - timedelta(seconds=1), zone) if self.end > self.start else first
        return [first + timedelta(days=i) for i in range((last - first).days + 1)]


@dataclass(frozen=True)
class UserActivityProfile:
    """Days on which a user was recorded.

    d_total equals len(active_days) in active-days mode and the window length
    in window-span mode.
    """

    user_id: str
    active_days: frozenset[date] = field(default_factory=frozenset)
    d_total: int = 0
