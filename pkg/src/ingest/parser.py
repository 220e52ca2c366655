"""Streaming parsers for CDR and WiFi association logs."""

import codecs
import csv
import math
from collections.abc import Iterator
from dataclasses import dataclass
from datetime import UTC, datetime
from typing import IO
from zoneinfo import ZoneInfo

import polars as pl

from src.config.settings import ColumnMap, TimestampFormat, resolve_timezone
from src.domain.events import CDR_CHANNELS, AssocEvent, AssocKind, Channel, utc_from_epoch
from src.errors import FormatError, InputError
from src.ingest.log import EVENT_SCHEMA, AssocBatch, EventBatch
from src.logger.logger import get_logger
from src.logger.types import Category, param

DEFAULT_MAX_MALFORMED = 0.10
WIFI_COLUMNS: tuple[str, ...] = ("user_id", "ap_id", "timestamp", "kind")
_ASSOC_KINDS = {kind.value: kind for kind in AssocKind}


# Один день запаса с обеих сторон: local day ещё вычисляется в любой зоне
_EPOCH_MIN = math.floor(datetime(1, 1, 2, tzinfo=UTC).timestamp())
_EPOCH_MAX = math.floor(datetime(9999, 12, 30, tzinfo=UTC).timestamp())


def parse_timestamp(raw: str, fmt: TimestampFormat, zone: ZoneInfo) -> int | None:
    """
    Parse a timestamp cell into epoch seconds.

    Integer cells are epoch seconds; anything else is read as ISO-8601. Naive
    ISO values are local time in `zone`. Returns None for unparseable cells
    and for instants outside years 1..9999.
    """
    digits = raw[1:] if raw.startswith("-") else raw
    looks_numeric = digits.isascii() and digits.isdigit()
    if fmt == "epoch" or (fmt == "auto" and looks_numeric):
        if not looks_numeric:
            return None
        seconds = int(raw)
    else:
        try:
            instant = datetime.fromisoformat(raw)
            if instant.tzinfo is None:
                instant = instant.replace(tzinfo=zone)
            seconds = math.floor(instant.timestamp())
        except (ValueError, OverflowError, OSError):
            return None
    return seconds if _EPOCH_MIN <= seconds <= _EPOCH_MAX else None


@dataclass
class _Scan:
    rows: int = 0
    malformed: int = 0


class _RowScanner:
    """Reads a delimited UTF-8 byte stream with a named header, one pass."""

    def __init__(self, stream: IO[bytes], required: tuple[str, ...], delimiter: str, source: str) -> None:
        self.stream = stream
        self.required = required
        self.delimiter = delimiter
        self.source = source
        self.stats = _Scan()

    def rows(self) -> Iterator[list[str] | None]:
        """Yields the required cells of each data row, or None for a malformed row."""
        reader = csv.reader(self._lines(), delimiter=self.delimiter)
        try:
            header = next(reader, None)
            if header is None:
                return
            index = self._index(header)
            width = max(index) + 1

            for record in reader:
                if not record:
                    continue
                self.stats.rows += 1
                if len(record) < width:
                    self.stats.malformed += 1
                    yield None
                    continue
                yield [record[i].strip() for i in index]
        except csv.Error as e:
            raise FormatError(f"{self.source}: {e}") from e

    def _lines(self) -> Iterator[str]:
        decoder = codecs.getincrementaldecoder("utf-8-sig")()
        pending = ""
        try:
            for chunk in iter(lambda: self.stream.read(1 << 20), b""):
                pending += decoder.decode(chunk)
                *complete, pending = pending.split("\n")
                for line in complete:
                    yield line
            pending += decoder.decode(b"", final=True)
        except UnicodeDecodeError as e:
            raise FormatError(f"{self.source}: not UTF-8 text ({e.reason})") from e
        except OSError as e:
            raise InputError(f"{self.source}: cannot read stream ({e.strerror or e})") from e
        if pending:
            yield pending

    def _index(self, header: list[str]) -> list[int]:
        names = [h.strip() for h in header]
        missing = [name for name in self.required if name not in names]
        if missing:
            raise FormatError(
                f"{self.source}: header {','.join(names)} lacks required column(s) {','.join(missing)}"
            )
        return [names.index(name) for name in self.required]

    def check_malformed(self, max_fraction: float) -> None:
        stats = self.stats
        logger = get_logger().with_category(Category.INGEST)
        if stats.malformed:
            logger.warn(
                "Malformed rows skipped",
                param("source", self.source),
                param("rows", stats.rows),
                param("malformed", stats.malformed),
            )
        if stats.rows and stats.malformed / stats.rows > max_fraction:
            raise FormatError(
                f"{self.source}: {stats.malformed} of {stats.rows} rows malformed "
                f"(limit {max_fraction:.0%})"
            )


def parse_raw_cdr(
    stream: IO[bytes],
    column_map: ColumnMap | None = None,
    timezone: str = "UTC",
    *,
    channels: frozenset[Channel] = CDR_CHANNELS,
    max_malformed_fraction: float = DEFAULT_MAX_MALFORMED,
    source: str = "<cdr>",
) -> EventBatch:
    """
    Parse a CDR (or normalized event) file into Events.

    Args:
        stream: UTF-8 delimited byte stream with a header row
        column_map: Header names and timestamp format
        timezone: Zone for naive ISO timestamps
        channels: Accepted channel values (add WIFI for the normalized format)
        max_malformed_fraction: Abort when more rows than this are malformed
        source: Name used in errors and logs

    Returns:
        EventBatch with one Event per well-formed row

    Raises:
        InputError: Stream cannot be read
        FormatError: Header mismatch or too many malformed rows
    """
    cmap = column_map or ColumnMap()
    zone = resolve_timezone(timezone)
    accepted = {c.value for c in channels}
    scanner = _RowScanner(
        stream,
        (cmap.user_id, cmap.timestamp, cmap.place_id, cmap.channel),
        cmap.delimiter,
        source,
    )

    user_ids: list[str] = []
    place_ids: list[str] = []
    stamps: list[int] = []
    channel_values: list[str] = []

    for cells in scanner.rows():
        if cells is None:
            continue
        user_id, raw_ts, place_id, channel = cells
        ts = parse_timestamp(raw_ts, cmap.timestamp_format, zone) if raw_ts else None
        if not user_id or not place_id or ts is None or channel not in accepted:
            scanner.stats.malformed += 1
            continue
        user_ids.append(user_id)
        place_ids.append(place_id)
        stamps.append(ts)
        channel_values.append(channel)

    scanner.check_malformed(max_malformed_fraction)

    frame = pl.DataFrame(
        {"user_id": user_ids, "place_id": place_ids, "ts": stamps, "channel": channel_values},
        schema=EVENT_SCHEMA,
    )
    get_logger().with_category(Category.INGEST).info(
        "Parsed event file",
        param("source", source),
        param("rows", scanner.stats.rows),
        param("events", frame.height),
    )
    return EventBatch(frame, rows=scanner.stats.rows, malformed=scanner.stats.malformed, source=source)


def parse_raw_wifi(
    stream: IO[bytes],
    timezone: str = "UTC",
    *,
    timestamp_format: TimestampFormat = "auto",
    delimiter: str = ",",
    max_malformed_fraction: float = DEFAULT_MAX_MALFORMED,
    source: str = "<wifi>",
) -> AssocBatch:
    """
    Parse a WiFi association log (`user_id,ap_id,timestamp,kind`).

    Same malformed-row policy as parse_raw_cdr.
    """
    zone = resolve_timezone(timezone)
    scanner = _RowScanner(stream, WIFI_COLUMNS, delimiter, source)
    records: list[AssocEvent] = []

    for cells in scanner.rows():
        if cells is None:
            continue
        user_id, ap_id, raw_ts, raw_kind = cells
        ts = parse_timestamp(raw_ts, timestamp_format, zone) if raw_ts else None
        kind = _ASSOC_KINDS.get(raw_kind)
        if not user_id or not ap_id or ts is None or kind is None:
            scanner.stats.malformed += 1
            continue
        records.append(AssocEvent(user_id, ap_id, utc_from_epoch(ts), kind))

    scanner.check_malformed(max_malformed_fraction)
    get_logger().with_category(Category.INGEST).info(
        "Parsed association file",
        param("source", source),
        param("rows", scanner.stats.rows),
        param("events", len(records)),
    )
    return AssocBatch(records, rows=scanner.stats.rows, malformed=scanner.stats.malformed, source=source)
