"""Per-user classification and cohort grouping by ht-index."""

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import replace
from functools import partial

from src.domain.classification import GROUP3_LABELS, GroupDistribution, PlaceLabel, UserClassification
from src.domain.relevance import RelevanceTable
from src.errors import ContractViolation
from src.htb.breaks import HEAD_LIMIT, head_tail_breaks
from src.workers import map_chunked


def classify_user(table: RelevanceTable, head_limit: float = HEAD_LIMIT) -> UserClassification:
    """
    Run Head/Tail breaks on one user's RR values.

    Every place gets a class index (1 = lowest RR); users with ht-index 3 also
    get EVP/OVP/MVP labels.
    """
    if not table.records:
        raise ContractViolation(f"user {table.user_id} has an empty relevance table")

    htb = head_tail_breaks(table.rr_values, head_limit)
    class_of = {record.place_id: htb.class_index(record.rr) for record in table.records}
    htb = replace(htb, class_of=class_of)

    labels: dict[str, PlaceLabel] = {}
    if htb.ht_index == 3:
        labels = {place_id: GROUP3_LABELS[c] for place_id, c in class_of.items()}
    return UserClassification(table.user_id, htb, table, labels)


def classify_tables(tables: Sequence[RelevanceTable], head_limit: float = HEAD_LIMIT) -> list[UserClassification]:
    """Classify a chunk of users (worker entry point)."""
    return [classify_user(table, head_limit) for table in tables]


def classify_cohort(
    tables: Sequence[RelevanceTable],
    head_limit: float = HEAD_LIMIT,
    workers: int = 1,
) -> list[UserClassification]:
    """
    Classify every user of a cohort, in input order.

    With workers > 1 users are chunked over a process pool; the result is the
    same as the serial run.
    """
    return map_chunked(partial(classify_tables, head_limit=head_limit), tables, workers)


def group_cohort(classifications: Iterable[UserClassification]) -> GroupDistribution:
    """
    Histogram of users over ht-index values.

    Raises:
        ContractViolation: Empty cohort
    """
    counts = Counter(c.group for c in classifications)
    total = sum(counts.values())
    if total == 0:
        raise ContractViolation("cannot group an empty cohort")
    return GroupDistribution(dict(sorted(counts.items())), total)
