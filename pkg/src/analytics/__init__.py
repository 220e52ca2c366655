"""Cohort statistics and the K-means baseline."""

from src.analytics.ccdf import ccdf, pooled_rr_ccdf
from src.analytics.classes import (
    class_composition,
    class_rr_distributions,
    distinct_poi_counts,
    group_members,
    user_class_shares,
)
from src.analytics.comparison import compare_htb_kmeans, kmeans_partitions, rand_index
from src.analytics.kmeans import KMeansResult, kmeans_1d, kmeans_classify_user
from src.analytics.pause_time import pause_time_analysis, rank_correlation

__all__ = [
    "KMeansResult",
    "ccdf",
    "class_composition",
    "class_rr_distributions",
    "compare_htb_kmeans",
    "distinct_poi_counts",
    "group_members",
    "kmeans_1d",
    "kmeans_classify_user",
    "kmeans_partitions",
    "pause_time_analysis",
    "pooled_rr_ccdf",
    "rand_index",
    "rank_correlation",
    "user_class_shares",
]
