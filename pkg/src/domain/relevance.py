"""Relevance Ratio records."""

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True, slots=True)
class RelevanceRecord:
    """RR of one place for one user: d_visit / d_total."""

    user_id: str
    place_id: str
    d_visit: int
    d_total: int
    rr: float


def record_sort_key(record: RelevanceRecord) -> tuple[float, str]:
    """Descending rr, then ascending place_id."""
    return (-record.rr, record.place_id)


@dataclass(frozen=True)
class RelevanceTable:
    """All RR records of one user, one per distinct visited place."""

    user_id: str
    d_total: int
    records: tuple[RelevanceRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[RelevanceRecord]:
        return iter(self.records)

    @property
    def place_ids(self) -> list[str]:
        return [r.place_id for r in self.records]

    @property
    def rr_values(self) -> list[float]:
        return [r.rr for r in self.records]

    @cached_property
    def rr_by_place(self) -> dict[str, float]:
        return {r.place_id: r.rr for r in self.records}

    def rr_of(self, place_id: str) -> float:
        """RR of a visited place; KeyError for places the user never visited."""
        return self.rr_by_place[place_id]
