"""WiFi session reconstruction and significant-stay extraction."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from itertools import groupby
from operator import attrgetter

from src.domain.events import AssocEvent, AssocKind, Stay
from src.logger.logger import get_logger
from src.logger.types import Category, param

PAUSE_THRESHOLD = 900  # seconds; significant stays are strictly longer
MERGE_GAP = 60


@dataclass
class _OpenSession:
    ap_id: str
    start: datetime


@dataclass
class SessionPairer:
    """
    Single-pass association/disassociation state machine.

    A device holds at most one open session. An assoc to another AP closes the
    open one at the new timestamp; an assoc to the same AP continues it; a
    disassoc without a matching open session is counted and skipped. The last
    open session of each user is closed at `window_end` and flagged.
    """

    window_end: datetime | None = None
    orphan_disassocs: int = 0
    reassociations: int = 0
    open_ended: int = 0
    empty_sessions: int = 0
    _stays: list[Stay] = field(default_factory=list)

    def pair(self, assoc_events: Iterable[AssocEvent]) -> list[Stay]:
        events = sorted(assoc_events, key=attrgetter("user_id", "timestamp"))
        if not events:
            return []
        window_end = self.window_end or max(e.timestamp for e in events)

        self._stays = []
        for user_id, user_events in groupby(events, key=attrgetter("user_id")):
            current: _OpenSession | None = None
            for event in user_events:
                current = self._step(user_id, current, event)
            if current is not None:
                self._close(user_id, current, window_end, open_ended=True)

        if self.orphan_disassocs or self.open_ended:
            get_logger().with_category(Category.PREPROCESS).warn(
                "Session pairing anomalies",
                param("orphan_disassocs", self.orphan_disassocs),
                param("open_ended", self.open_ended),
                param("empty_sessions", self.empty_sessions),
            )
        return self._stays

    def _step(self, user_id: str, current: _OpenSession | None, event: AssocEvent) -> _OpenSession | None:
        if event.kind is AssocKind.ASSOC:
            if current is None:
                return _OpenSession(event.ap_id, event.timestamp)
            if current.ap_id == event.ap_id:
                self.reassociations += 1
                return current
            self._close(user_id, current, event.timestamp)
            return _OpenSession(event.ap_id, event.timestamp)

        if current is None or current.ap_id != event.ap_id:
            self.orphan_disassocs += 1
            return current
        self._close(user_id, current, event.timestamp)
        return None

    def _close(self, user_id: str, session: _OpenSession, end: datetime, open_ended: bool = False) -> None:
        if end <= session.start:
            self.empty_sessions += 1
            return
        if open_ended:
            self.open_ended += 1
        self._stays.append(Stay(user_id, session.ap_id, session.start, end, open_ended))


def pair_sessions(assoc_events: Iterable[AssocEvent], window_end: datetime | None = None) -> list[Stay]:
    """Pair association events into stays (see SessionPairer)."""
    return SessionPairer(window_end=window_end).pair(assoc_events)


def _merge_run(stays: Sequence[Stay], gap: timedelta) -> list[Stay]:
    merged: list[Stay] = []
    for stay in stays:
        if merged and stay.start - merged[-1].end <= gap:
            last = merged[-1]
            if stay.end > last.end:
                merged[-1] = Stay(
                    last.user_id, last.place_id, last.start, stay.end, last.open_ended or stay.open_ended
                )
            continue
        merged.append(stay)
    return merged


def extract_stays(
    stays: Iterable[Stay],
    min_pause: int = PAUSE_THRESHOLD,
    merge_gap: int = MERGE_GAP,
) -> list[Stay]:
    """
    Keep a user's significant WiFi visits.

    Consecutive stays of the same user at the same AP separated by at most
    `merge_gap` seconds are merged first; then stays lasting `min_pause`
    seconds or less are dropped.
    """
    gap = timedelta(seconds=merge_gap)
    by_place = sorted(stays, key=attrgetter("user_id", "place_id", "start"))

    kept: list[Stay] = []
    for _, run in groupby(by_place, key=attrgetter("user_id", "place_id")):
        kept.extend(s for s in _merge_run(list(run), gap) if s.duration > min_pause)

    kept.sort(key=attrgetter("user_id", "start", "place_id"))
    return kept
