"""Ingest: parsing raw logs into a normalized event log."""

from src.ingest.log import AssocBatch, EventBatch, EventLog
from src.ingest.normalize import normalize, with_local_day
from src.ingest.parser import parse_raw_cdr, parse_raw_wifi, parse_timestamp

__all__ = [
    "AssocBatch",
    "EventBatch",
    "EventLog",
    "normalize",
    "parse_raw_cdr",
    "parse_raw_wifi",
    "parse_timestamp",
    "with_local_day",
]
