"""Report documents and their YAML serialisation."""

from src.report.schema import (
    SCHEMA_VERSION,
    CohortReport,
    ComparisonDocument,
    ComparisonSection,
    CompositionRow,
    CurveRef,
    DatasetSummary,
    GroupRow,
    PauseTimeSection,
    RecoverySection,
)
from src.report.writer import ReportWriter, without_timestamp

__all__ = [
    "SCHEMA_VERSION",
    "CohortReport",
    "ComparisonDocument",
    "ComparisonSection",
    "CompositionRow",
    "CurveRef",
    "DatasetSummary",
    "GroupRow",
    "PauseTimeSection",
    "RecoverySection",
    "ReportWriter",
    "without_timestamp",
]
