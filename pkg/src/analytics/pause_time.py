"""Stay durations by relevance class."""

import math
from collections import defaultdict
from collections.abc import Iterable, Sequence

from scipy.stats import spearmanr

from src.analytics.ccdf import ccdf
from src.domain.analytics import PauseTimeReport
from src.domain.classification import UserClassification
from src.domain.events import Stay
from src.errors import ContractViolation
from src.logger.logger import get_logger
from src.logger.types import Category, param

MAJORITY = 0.5


def rank_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rho with average ranks for ties; 0 when either series is constant."""
    if len(x) != len(y):
        raise ContractViolation("rank correlation needs series of equal length")
    if len(x) < 2 or len(set(x)) < 2 or len(set(y)) < 2:
        return 0.0
    rho = float(spearmanr(x, y).statistic)
    return 0.0 if math.isnan(rho) else rho


def pause_time_analysis(
    stays: Sequence[Stay],
    classifications: Iterable[UserClassification],
    group: int | None = 3,
) -> PauseTimeReport:
    """
    Pool stay durations by the class of their (user, place).

    Only users whose ht-index equals `group` are considered (all users when
    group is None, classes then taken as-is). Durations are in seconds.

    Returns:
        PauseTimeReport with per-class duration CCDFs, the rank correlation
        between RR and mean stay duration per (user, place), each class's
        macro-averaged share of user stay time and the fraction of users
        spending more than half of it in their top class.

    Raises:
        ContractViolation: No stays, or no stay matches a classified place
    """
    if not stays:
        raise ContractViolation("pause time analysis needs at least one stay")

    members = {c.user_id: c for c in classifications if group is None or c.group == group}

    by_class: dict[int, list[float]] = defaultdict(list)
    by_pair: dict[tuple[str, str], list[float]] = defaultdict(list)
    per_user: dict[str, dict[int, float]] = defaultdict(lambda: defaultdict(float))
    unmatched = 0
    for stay in stays:
        member = members.get(stay.user_id)
        cls = member.htb.class_of.get(stay.place_id) if member else None
        if member is None or cls is None:
            unmatched += 1
            continue
        seconds = float(stay.duration)
        by_class[cls].append(seconds)
        by_pair[(stay.user_id, stay.place_id)].append(seconds)
        per_user[stay.user_id][cls] += seconds

    if not by_pair:
        raise ContractViolation(f"no stay matches a place of a group {group} user")
    if unmatched:
        get_logger().with_category(Category.ANALYTICS).info(
            "stays without a classified place", param("unmatched", unmatched), param("group", group)
        )

    pairs = sorted(by_pair)
    rr = [members[u].table.rr_by_place[p] for u, p in pairs]
    mean_duration = [math.fsum(by_pair[key]) / len(by_pair[key]) for key in pairs]
    rho = rank_correlation(rr, mean_duration)

    classes = sorted(by_class)
    share_sums: dict[int, float] = dict.fromkeys(classes, 0.0)
    majority = 0
    for user_id, totals in per_user.items():
        user_total = math.fsum(totals.values())
        if user_total <= 0:
            continue
        for c, seconds in totals.items():
            share_sums[c] += seconds / user_total
        top = members[user_id].group
        if totals.get(top, 0.0) / user_total > MAJORITY:
            majority += 1

    users = len(per_user)
    return PauseTimeReport(
        group=group,
        stays=len(stays),
        unmatched_stays=unmatched,
        pairs=len(pairs),
        curves={c: ccdf(by_class[c]) for c in classes},
        mean_duration={c: math.fsum(by_class[c]) / len(by_class[c]) for c in classes},
        spearman_rho=rho,
        time_share={c: share_sums[c] / users for c in classes},
        top_class_majority=majority / users,
    )
