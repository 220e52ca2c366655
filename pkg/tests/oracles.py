"""Brute-force reference implementations the library is checked against."""

import itertools
import math
from collections import defaultdict
from collections.abc import Sequence
from datetime import date, datetime, timedelta
from fractions import Fraction
from zoneinfo import ZoneInfo

from src.domain.classification import HtbResult
from src.domain.events import AssocEvent, AssocKind, Event, Stay


def htb_oracle(
    values: Sequence[float], head_limit: float = 0.40, first: bool = True
) -> tuple[list[float], list[list[float]]]:
    """Recursive Head/Tail breaks: (breaks, classes lowest first)."""
    vals = sorted(values)
    if len(set(vals)) < 2:
        return [], [vals]
    mean = math.fsum(vals) / len(vals)
    head = [v for v in vals if v > mean]
    tail = [v for v in vals if not v > mean]
    if not head or not tail:
        return [], [vals]
    majority = len(head) / len(vals) > head_limit
    if majority and not first:
        return [], [vals]
    if majority:
        return [mean], [tail, head]
    breaks, classes = htb_oracle(head, head_limit, first=False)
    return [mean, *breaks], [tail, *classes]


def sse(cluster: Sequence[float]) -> float:
    if not cluster:
        return 0.0
    m = sum(cluster) / len(cluster)
    return sum((v - m) ** 2 for v in cluster)


def kmeans_exhaustive(values: Sequence[float], k: int) -> float:
    """Minimum within-cluster sum of squares over every split of the sorted values into k intervals."""
    xs = sorted(values)
    n = len(xs)
    best = math.inf
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        cost = sum(sse(xs[bounds[i] : bounds[i + 1]]) for i in range(k))
        best = min(best, cost)
    return best


def session_oracle(events: Sequence[AssocEvent], window_end: datetime | None = None) -> list[Stay]:
    """Per-user replay of the association log with an explicit open-session slot."""
    if not events:
        return []
    end_of_log = window_end or max(e.timestamp for e in events)
    per_user: dict[str, list[AssocEvent]] = defaultdict(list)
    for e in sorted(events, key=lambda e: (e.user_id, e.timestamp)):
        per_user[e.user_id].append(e)

    out: list[Stay] = []
    for user, seq in per_user.items():
        open_ap: str | None = None
        open_at: datetime | None = None
        for e in seq:
            if e.kind == AssocKind.ASSOC:
                if open_ap is None:
                    open_ap, open_at = e.ap_id, e.timestamp
                elif open_ap != e.ap_id:
                    assert open_at is not None
                    if e.timestamp > open_at:
                        out.append(Stay(user, open_ap, open_at, e.timestamp))
                    open_ap, open_at = e.ap_id, e.timestamp
            elif open_ap == e.ap_id:
                assert open_at is not None
                if e.timestamp > open_at:
                    out.append(Stay(user, open_ap, open_at, e.timestamp))
                open_ap, open_at = None, None
        if open_ap is not None and open_at is not None and end_of_log > open_at:
            out.append(Stay(user, open_ap, open_at, end_of_log, open_ended=True))
    return out


def merge_then_filter(stays: Sequence[Stay], min_pause: int, merge_gap: int) -> set[tuple[str, str, datetime, datetime]]:
    """Repeatedly merge any two same-(user, AP) stays within merge_gap, then filter by duration."""
    items = sorted((s.user_id, s.place_id, s.start, s.end) for s in stays)
    gap = timedelta(seconds=merge_gap)
    changed = True
    while changed:
        changed = False
        for i, j in itertools.combinations(range(len(items)), 2):
            a, b = items[i], items[j]
            if a[:2] != b[:2]:
                continue
            first, second = (a, b) if a[2] <= b[2] else (b, a)
            if second[2] - first[3] <= gap:
                merged = (a[0], a[1], first[2], max(first[3], second[3]))
                items = [x for n, x in enumerate(items) if n not in (i, j)] + [merged]
                items.sort()
                changed = True
                break
    return {s for s in items if (s[3] - s[2]).total_seconds() > min_pause}


def active_users_oracle(events: Sequence[Event], first_day: date, last_day: date, zone: ZoneInfo) -> set[str]:
    """Users with an event on every local day of [first_day, last_day]."""
    needed = {first_day + timedelta(days=i) for i in range((last_day - first_day).days + 1)}
    days: dict[str, set[date]] = defaultdict(set)
    for e in events:
        days[e.user_id].add(e.timestamp.astimezone(zone).date())
    return {u for u, seen in days.items() if needed <= seen}


def rr_oracle(events: Sequence[Event], zone: ZoneInfo) -> dict[str, dict[str, Fraction]]:
    """Exact RR per user and place from calendar days."""
    user_days: dict[str, set[date]] = defaultdict(set)
    place_days: dict[tuple[str, str], set[date]] = defaultdict(set)
    for e in events:
        day = e.timestamp.astimezone(zone).date()
        user_days[e.user_id].add(day)
        place_days[(e.user_id, e.place_id)].add(day)
    out: dict[str, dict[str, Fraction]] = defaultdict(dict)
    for (user, place), days in place_days.items():
        out[user][place] = Fraction(len(days), len(user_days[user]))
    return dict(out)


def assert_htb_laws(result: HtbResult, head_limit: float = 0.40) -> None:
    """Ordering, minority-head and class-size laws of a Head/Tail breaks result."""
    assert result.ht_index == len(result.classes)
    assert all(a < b for a, b in zip(result.breaks, result.breaks[1:], strict=False))
    for lower, upper in zip(result.classes, result.classes[1:], strict=False):
        assert max(lower) < min(upper)
        assert sum(map(Fraction, lower)) / len(lower) < sum(map(Fraction, upper)) / len(upper)
    for fraction in result.head_fractions[1:]:
        assert fraction <= head_limit
    if result.ht_index >= 3:
        assert result.head_fractions[0] <= head_limit
        sizes = [len(c) for c in result.classes]
        for i in range(len(sizes) - 1):
            assert sizes[i] > sum(sizes[i + 1 :])
