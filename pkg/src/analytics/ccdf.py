"""Empirical complementary CDFs."""

from collections.abc import Iterable

import numpy as np

from src.domain.analytics import CcdfCurve
from src.domain.relevance import RelevanceTable
from src.errors import ContractViolation


def ccdf(samples: Iterable[float]) -> CcdfCurve:
    """
    Empirical CCDF evaluated at every distinct sample value.

    p(x) is the fraction of samples strictly greater than x, so the last point
    is always 0 and any x below the smallest sample maps to 1.
    """
    values = np.fromiter(samples, dtype=float)
    if values.size == 0:
        raise ContractViolation("ccdf needs at least one sample")

    xs, counts = np.unique(values, return_counts=True)
    greater = values.size - np.cumsum(counts)
    ps = greater / values.size
    return CcdfCurve(tuple(zip(xs.tolist(), ps.tolist(), strict=True)), int(values.size))


def pooled_rr_ccdf(tables: Iterable[RelevanceTable]) -> CcdfCurve:
    """CCDF of RR pooled over every user and place."""
    return ccdf(record.rr for table in tables for record in table.records)
