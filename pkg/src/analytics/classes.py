"""Per-class statistics of a classified cohort."""

from collections.abc import Iterable
from fractions import Fraction

from src.analytics.ccdf import ccdf
from src.config.settings import AveragingMode
from src.domain.analytics import ClassComposition, GroupCurves, PoiCountDistribution
from src.domain.classification import UserClassification, class_key
from src.errors import ContractViolation
from src.logger.logger import get_logger
from src.logger.types import Category, param


def group_members(cohort: Iterable[UserClassification], group: int) -> list[UserClassification]:
    """Users with ht-index `group`, ordered by user_id."""
    if group < 1:
        raise ContractViolation(f"group must be >= 1, got {group}")
    return sorted((c for c in cohort if c.group == group), key=lambda c: c.user_id)


def _log_empty(group: int, what: str) -> None:
    get_logger().with_category(Category.ANALYTICS).info(
        "skipping empty group", param("group", group), param("statistic", what)
    )


def class_rr_distributions(cohort: Iterable[UserClassification], group: int) -> GroupCurves:
    """
    CCDF of RR per class, pooled over the users of one group.

    Returns an empty GroupCurves when no user has ht-index `group`.
    """
    members = group_members(cohort, group)
    if not members:
        _log_empty(group, "class_rr")
        return GroupCurves(group, 0)

    pooled: dict[int, list[float]] = {c: [] for c in range(1, group + 1)}
    for member in members:
        for record in member.table:
            pooled[member.htb.class_of[record.place_id]].append(record.rr)
    curves = {c: ccdf(values) for c, values in pooled.items()}
    return GroupCurves(group, len(members), curves)


def distinct_poi_counts(cohort: Iterable[UserClassification], group: int) -> PoiCountDistribution:
    """Number of distinct places in every class, one count per user of the group."""
    members = group_members(cohort, group)
    if not members:
        _log_empty(group, "poi_count")
        return PoiCountDistribution(group, 0)

    sizes = [m.class_sizes() for m in members]
    counts = {c: tuple(s[c] for s in sizes) for c in range(1, group + 1)}
    curves = {c: ccdf(float(n) for n in values) for c, values in counts.items()}
    return PoiCountDistribution(group, len(members), counts, curves)


def user_class_shares(classification: UserClassification) -> dict[int, Fraction]:
    """Exact share of a user's places in each class; the shares sum to 1."""
    sizes = classification.class_sizes()
    total = sum(sizes.values())
    return {c: Fraction(n, total) for c, n in sizes.items()}


def class_composition(
    cohort: Iterable[UserClassification],
    group: int = 3,
    averaging: AveragingMode = "macro",
) -> ClassComposition:
    """
    Average percentage of places per class over the users of one group.

    Args:
        cohort: Classified users
        group: ht-index of the users to average over
        averaging: "macro" averages per-user percentages, "micro" pools places

    Returns:
        ClassComposition keyed by label (group 3) or class_<i>

    Raises:
        ContractViolation: No user in the group
    """
    members = group_members(cohort, group)
    if not members:
        raise ContractViolation(f"group {group} is empty, cannot compute class composition")

    classes = range(1, group + 1)
    if averaging == "macro":
        shares = [user_class_shares(m) for m in members]
        avg = {c: sum((s[c] for s in shares), Fraction(0)) / len(members) for c in classes}
    else:
        sizes = [m.class_sizes() for m in members]
        total = sum(sum(s.values()) for s in sizes)
        avg = {c: Fraction(sum(s[c] for s in sizes), total) for c in classes}

    percentages = {class_key(group, c): float(100 * avg[c]) for c in classes}
    return ClassComposition(group, len(members), averaging, percentages)
