"""Versioned report documents.

A report is one YAML document; CCDF curves are embedded as points and also
written as `x,p` sidecar files whose paths (relative to the report) are
listed under `curves`.
"""

from datetime import datetime
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from src.domain.analytics import CcdfCurve, ClassComposition, ComparisonReport, PauseTimeReport
from src.domain.classification import GroupDistribution
from src.synth.recovery import RecoveryMetrics

SCHEMA_VERSION = "1.0"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CurveRef(_Section):
    file: str
    samples: int = Field(ge=1)
    points: list[tuple[float, float]]

    @classmethod
    def of(cls, curve: CcdfCurve, file: str) -> "CurveRef":
        return cls(file=file, samples=curve.samples, points=list(curve.points))

    def to_curve(self) -> CcdfCurve:
        return CcdfCurve(tuple((x, p) for x, p in self.points), self.samples)


class DatasetSummary(_Section):
    """Dataset size before and after preprocessing."""

    kind: str
    inputs: list[str]
    rows: int = Field(ge=0)
    malformed_rows: int = Field(ge=0)
    records: int = Field(ge=0)
    users_before: int = Field(ge=0)
    users_after: int = Field(ge=0)
    days: int = Field(ge=0)
    window_start: str | None = None
    window_end: str | None = None
    pois: int = Field(ge=0)


class GroupRow(_Section):
    group: int = Field(ge=1)
    users: int = Field(ge=0)
    percent: float = Field(ge=0.0, le=100.0)

    @classmethod
    def rows_of(cls, distribution: GroupDistribution) -> list["GroupRow"]:
        return [cls(group=g, users=n, percent=pct) for g, n, pct in distribution.rows()]


class CompositionRow(_Section):
    """Average percentage of places per class for one group."""

    group: int = Field(ge=1)
    users: int = Field(ge=1)
    averaging: Literal["macro", "micro"]
    percentages: dict[str, float]

    @classmethod
    def of(cls, composition: ClassComposition) -> "CompositionRow":
        return cls(
            group=composition.group,
            users=composition.users,
            averaging=composition.averaging,  # type: ignore[arg-type]
            percentages=dict(composition.percentages),
        )


class PauseTimeSection(_Section):
    group: int | None
    stays: int
    unmatched_stays: int
    pairs: int
    spearman_rho: float = Field(ge=-1.0, le=1.0)
    mean_duration_s: dict[int, float]
    time_share: dict[int, float]
    top_class_majority: float = Field(ge=0.0, le=1.0)

    @classmethod
    def of(cls, report: PauseTimeReport) -> "PauseTimeSection":
        return cls(
            group=report.group,
            stays=report.stays,
            unmatched_stays=report.unmatched_stays,
            pairs=report.pairs,
            spearman_rho=report.spearman_rho,
            mean_duration_s=dict(report.mean_duration),
            time_share=dict(report.time_share),
            top_class_majority=report.top_class_majority,
        )


class ComparisonSection(_Section):
    """Coverage and agreement of Head/Tail breaks and the K-means baseline."""

    users: int = Field(ge=1)
    k: int = Field(ge=1)
    htb_coverage: float = Field(ge=0.0, le=1.0)
    kmeans_coverage: float = Field(ge=0.0, le=1.0)
    common_users: int = Field(ge=0)
    agreement: float | None = Field(default=None, ge=0.0, le=1.0)
    agreement_by_group: dict[int, float] = Field(default_factory=dict)
    kmeans_clusters: dict[int, int] = Field(default_factory=dict)

    @classmethod
    def of(cls, report: ComparisonReport) -> "ComparisonSection":
        return cls(
            users=report.users,
            k=report.k,
            htb_coverage=report.htb_coverage,
            kmeans_coverage=report.kmeans_coverage,
            common_users=report.common_users,
            agreement=report.agreement,
            agreement_by_group=dict(report.agreement_by_group),
            kmeans_clusters=dict(report.kmeans_clusters),
        )


class RecoverySection(_Section):
    """Agreement with the planted truth of a synthetic cohort (`analyze --truth`)."""

    users: int = Field(ge=1)
    ht_recovered: int = Field(ge=0)
    ht_recovery: float = Field(ge=0.0, le=1.0)
    labeled_places: int = Field(ge=0)
    correct_labels: int = Field(ge=0)
    label_accuracy: float | None = Field(default=None, ge=0.0, le=1.0)

    @classmethod
    def of(cls, metrics: RecoveryMetrics) -> "RecoverySection":
        return cls(
            users=metrics.users,
            ht_recovered=metrics.ht_recovered,
            ht_recovery=metrics.ht_recovery,
            labeled_places=metrics.labeled_places,
            correct_labels=metrics.correct_labels,
            label_accuracy=metrics.label_accuracy,
        )


class _Document(_Section):
    schema_version: Literal["1.0"] = SCHEMA_VERSION
    tool_version: str
    generated_at: datetime
    config: dict[str, Any]
    dataset: DatasetSummary


class CohortReport(_Document):
    """Output of `analyze`."""

    command: Literal["analyze"] = "analyze"
    groups: list[GroupRow]
    composition: list[CompositionRow] = Field(default_factory=list)
    pause_time: PauseTimeSection | None = None
    comparison: ComparisonSection | None = None
    recovery: RecoverySection | None = None
    curves: dict[str, CurveRef] = Field(default_factory=dict)


class ComparisonDocument(_Document):
    """Output of `compare`."""

    command: Literal["compare"] = "compare"
    comparison: ComparisonSection


Document = Annotated[CohortReport | ComparisonDocument, Field(discriminator="command")]
