"""Cohort statistics results."""

from bisect import bisect_right
from collections.abc import Mapping
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CcdfCurve:
    """Empirical CCDF, p(x) = P(X > x), one point per distinct sample value."""

    points: tuple[tuple[float, float], ...]
    samples: int

    @property
    def xs(self) -> list[float]:
        return [x for x, _ in self.points]

    @property
    def ps(self) -> list[float]:
        return [p for _, p in self.points]

    def evaluate(self, x: float) -> float:
        """Fraction of samples strictly greater than x."""
        idx = bisect_right(self.xs, x)
        if idx == 0:
            return 1.0
        return self.points[idx - 1][1]


@dataclass(frozen=True)
class GroupCurves:
    """Per-class CCDFs for one group; `curves` is empty when the group has no users."""

    group: int
    users: int
    curves: Mapping[int, CcdfCurve] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.users == 0


@dataclass(frozen=True)
class PoiCountDistribution:
    """Distinct places per class for the users of one group.

    counts[c] holds one count per user, users ordered by user_id.
    """

    group: int
    users: int
    counts: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    curves: Mapping[int, CcdfCurve] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.users == 0


@dataclass(frozen=True)
class ClassComposition:
    """Average percentage of a user's places in each class (keys: EVP/OVP/MVP or class_<i>)."""

    group: int
    users: int
    averaging: str
    percentages: Mapping[str, float]


@dataclass(frozen=True)
class PauseTimeReport:
    """Stay durations (seconds) by class and their rank correlation with RR."""

    group: int | None
    stays: int
    unmatched_stays: int
    pairs: int
    curves: Mapping[int, CcdfCurve]
    mean_duration: Mapping[int, float]
    spearman_rho: float
    time_share: Mapping[int, float]
    top_class_majority: float


@dataclass(frozen=True)
class ComparisonReport:
    """Head/Tail breaks versus the K-means baseline on one cohort."""

    users: int
    k: int
    htb_coverage: float
    kmeans_coverage: float
    common_users: int
    agreement: float | None
    agreement_by_group: Mapping[int, float] = field(default_factory=dict)
    kmeans_clusters: Mapping[int, int] = field(default_factory=dict)
