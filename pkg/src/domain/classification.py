"""Head/Tail breaks classification results."""

from bisect import bisect_left
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from types import MappingProxyType

from src.domain.relevance import RelevanceTable


class PlaceLabel(StrEnum):
    """Semantic class of a place for a group-3 user."""

    EVP = "EVP"  # Exceptionally Visited Point, lowest RR class
    OVP = "OVP"  # Occasionally Visited Point
    MVP = "MVP"  # Most Visited Point, highest RR class


# Class index (1 = lowest RR) -> label, only defined for ht-index 3
GROUP3_LABELS: Mapping[int, PlaceLabel] = MappingProxyType(
    {1: PlaceLabel.EVP, 2: PlaceLabel.OVP, 3: PlaceLabel.MVP}
)


def class_key(group: int, class_index: int) -> str:
    """Report key of a class: its label in group 3, `class_<i>` elsewhere."""
    if group == 3:
        return GROUP3_LABELS[class_index].value
    return f"class_{class_index}"


@dataclass(frozen=True)
class HtbResult:
    """Outcome of Head/Tail breaks over one value vector.

    classes[i] holds the values of class i+1 in ascending order; class 1 is the
    lowest. head_fractions[j] is |head| / |partition| at break j.
    """

    breaks: tuple[float, ...]
    classes: tuple[tuple[float, ...], ...]
    head_fractions: tuple[float, ...]
    class_of: Mapping[str, int] = field(default_factory=dict)

    @property
    def ht_index(self) -> int:
        return len(self.breaks) + 1

    def class_index(self, value: float) -> int:
        """Class (1-based) a value falls into: one plus the number of breaks below it."""
        return bisect_left(self.breaks, value) + 1


@dataclass(frozen=True)
class UserClassification:
    """Per-user classification: the HTB result, its group and labels."""

    user_id: str
    htb: HtbResult
    table: RelevanceTable
    labels: Mapping[str, PlaceLabel] = field(default_factory=dict)

    @property
    def group(self) -> int:
        return self.htb.ht_index

    def places_in_class(self, class_index: int) -> list[str]:
        return [p for p, c in self.htb.class_of.items() if c == class_index]

    def class_sizes(self) -> dict[int, int]:
        sizes = dict.fromkeys(range(1, self.group + 1), 0)
        for c in self.htb.class_of.values():
            sizes[c] += 1
        return sizes


@dataclass(frozen=True)
class GroupDistribution:
    """Histogram of ht-index over a cohort."""

    counts: Mapping[int, int]
    total: int

    @property
    def percentages(self) -> dict[int, float]:
        return {g: 100.0 * n / self.total for g, n in sorted(self.counts.items())}

    def rows(self) -> list[tuple[int, int, float]]:
        """(group, users, percentage) rows ordered by group."""
        pct = self.percentages
        return [(g, self.counts[g], pct[g]) for g in sorted(self.counts)]
