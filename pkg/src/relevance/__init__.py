"""Relevance Ratio tables."""

from src.relevance.ratio import cohort_relevance, relevance_table, visit_day_frame

__all__ = ["cohort_relevance", "relevance_table", "visit_day_frame"]
