"""Domain models for htmobility."""

from src.domain.analytics import (
    CcdfCurve,
    ClassComposition,
    ComparisonReport,
    GroupCurves,
    PauseTimeReport,
    PoiCountDistribution,
)
from src.domain.classification import (
    GROUP3_LABELS,
    GroupDistribution,
    HtbResult,
    PlaceLabel,
    UserClassification,
    class_key,
)
from src.domain.events import (
    CDR_CHANNELS,
    AssocEvent,
    AssocKind,
    Channel,
    DayWindow,
    Event,
    Stay,
    UserActivityProfile,
)
from src.domain.relevance import RelevanceRecord, RelevanceTable

__all__ = [
    "CcdfCurve",
    "ClassComposition",
    "ComparisonReport",
    "GroupCurves",
    "PauseTimeReport",
    "PoiCountDistribution",
    "AssocEvent",
    "AssocKind",
    "CDR_CHANNELS",
    "Channel",
    "DayWindow",
    "Event",
    "GROUP3_LABELS",
    "GroupDistribution",
    "HtbResult",
    "PlaceLabel",
    "RelevanceRecord",
    "RelevanceTable",
    "Stay",
    "UserActivityProfile",
    "UserClassification",
    "class_key",
]
