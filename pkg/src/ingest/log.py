"""Column-wise event containers backed by polars frames."""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Any, overload

import polars as pl

from src.domain.events import (
    AssocEvent,
    Channel,
    DayWindow,
    Event,
    epoch_seconds,
    utc_from_epoch,
)
from src.errors import ContractViolation

EVENT_SCHEMA: dict[str, pl.DataType] = {
    "user_id": pl.String(),
    "place_id": pl.String(),
    "ts": pl.Int64(),
    "channel": pl.String(),
}
EVENT_COLUMNS: list[str] = list(EVENT_SCHEMA)
SORT_COLUMNS: list[str] = ["user_id", "ts", "place_id", "channel"]


def empty_event_frame() -> pl.DataFrame:
    return pl.DataFrame(schema=EVENT_SCHEMA)


class EventBatch(Sequence[Event]):
    """A sequence of Events stored column-wise.

    rows and malformed are the parse statistics of the file the batch came from
    (zero for batches built in memory).
    """

    def __init__(
        self,
        frame: pl.DataFrame | None = None,
        rows: int | None = None,
        malformed: int = 0,
        source: str | None = None,
    ) -> None:
        self.frame = (frame if frame is not None else empty_event_frame()).select(EVENT_COLUMNS)
        self.rows = self.frame.height + malformed if rows is None else rows
        self.malformed = malformed
        self.source = source

    @classmethod
    def from_events(cls, events: Iterable[Event]) -> "EventBatch":
        user_ids: list[str] = []
        place_ids: list[str] = []
        stamps: list[int] = []
        channels: list[str] = []
        for event in events:
            user_ids.append(event.user_id)
            place_ids.append(event.place_id)
            stamps.append(epoch_seconds(event.timestamp))
            channels.append(Channel(event.channel).value)
        frame = pl.DataFrame(
            {"user_id": user_ids, "place_id": place_ids, "ts": stamps, "channel": channels},
            schema=EVENT_SCHEMA,
        )
        return cls(frame)

    @classmethod
    def concat(cls, batches: Sequence["EventBatch"]) -> "EventBatch":
        if not batches:
            return cls()
        frame = pl.concat([b.frame for b in batches], how="vertical")
        return cls(
            frame,
            rows=sum(b.rows for b in batches),
            malformed=sum(b.malformed for b in batches),
        )

    def __len__(self) -> int:
        return self.frame.height

    @overload
    def __getitem__(self, index: int) -> Event: ...

    @overload
    def __getitem__(self, index: slice) -> "EventBatch": ...

    def __getitem__(self, index: int | slice) -> "Event | EventBatch":
        if isinstance(index, slice):
            return EventBatch(self.frame[index])
        if index < 0:
            index += self.frame.height
        if not 0 <= index < self.frame.height:
            raise IndexError(index)
        return _to_event(self.frame.row(index))

    def __iter__(self) -> Iterator[Event]:
        for row in self.frame.iter_rows():
            yield _to_event(row)

    def __repr__(self) -> str:
        return f"EventBatch(events={len(self)}, malformed={self.malformed})"


def _to_event(row: tuple[Any, ...]) -> Event:
    user_id, place_id, ts, channel = row[:4]
    return Event(user_id, place_id, utc_from_epoch(ts), Channel(channel))


class AssocBatch(Sequence[AssocEvent]):
    """Parsed WiFi association records plus parse statistics."""

    def __init__(
        self,
        records: Iterable[AssocEvent] = (),
        rows: int | None = None,
        malformed: int = 0,
        source: str | None = None,
    ) -> None:
        self.records: list[AssocEvent] = list(records)
        self.rows = len(self.records) + malformed if rows is None else rows
        self.malformed = malformed
        self.source = source

    @classmethod
    def concat(cls, batches: Sequence["AssocBatch"]) -> "AssocBatch":
        records: list[AssocEvent] = []
        for batch in batches:
            records.extend(batch.records)
        return cls(
            records,
            rows=sum(b.rows for b in batches),
            malformed=sum(b.malformed for b in batches),
        )

    def __len__(self) -> int:
        return len(self.records)

    @overload
    def __getitem__(self, index: int) -> AssocEvent: ...

    @overload
    def __getitem__(self, index: slice) -> "AssocBatch": ...

    def __getitem__(self, index: int | slice) -> "AssocEvent | AssocBatch":
        if isinstance(index, slice):
            return AssocBatch(self.records[index])
        return self.records[index]

    def __iter__(self) -> Iterator[AssocEvent]:
        return iter(self.records)

    def __repr__(self) -> str:
        return f"AssocBatch(events={len(self)}, malformed={self.malformed})"


@dataclass(frozen=True, eq=False)
class EventLog:
    """Normalized event log.

    frame columns: user_id, place_id, ts (epoch seconds), channel, day (local
    calendar day). Rows are sorted by (user_id, ts, place_id, channel) and
    unique. window is None for an empty log.
    """

    frame: pl.DataFrame
    window: DayWindow | None
    timezone: str = "UTC"
    dropped_outside_window: int = 0

    @property
    def events(self) -> EventBatch:
        return EventBatch(self.frame)

    @property
    def is_empty(self) -> bool:
        return self.window is None

    def __len__(self) -> int:
        return self.frame.height

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return (
            self.window == other.window
            and self.timezone == other.timezone
            and self.frame.equals(other.frame)
        )

    def __hash__(self) -> int:
        return hash((self.window, self.timezone, self.frame.height))

    def require_window(self) -> DayWindow:
        """Window of a non-empty log; empty logs are rejected downstream."""
        if self.window is None:
            raise ContractViolation("event log is empty (no observation window)")
        return self.window

    @property
    def users(self) -> list[str]:
        return self.frame.get_column("user_id").unique().sort().to_list()

    @property
    def user_count(self) -> int:
        return self.frame.get_column("user_id").n_unique()

    @property
    def place_count(self) -> int:
        return self.frame.get_column("place_id").n_unique()

    def user_events(self, user_id: str) -> EventBatch:
        return EventBatch(self.frame.filter(pl.col("user_id") == user_id))

    def visit_days(self) -> pl.DataFrame:
        """Distinct (user_id, place_id, day) triples."""
        return self.frame.select("user_id", "place_id", "day").unique()

    def with_frame(self, frame: pl.DataFrame) -> "EventLog":
        """Same window and timezone over a filtered frame."""
        return EventLog(frame, self.window, self.timezone)
