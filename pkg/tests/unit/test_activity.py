"""Tests for the active-user filter and activity profiles."""

import random
from datetime import date, timedelta
from zoneinfo import ZoneInfo

import pytest

from src.domain.events import DayWindow
from src.errors import ContractViolation
from src.ingest import normalize
from src.preprocess import activity_profile, filter_active_users, required_days
from tests.factories import BASE_DAY, at, event, stay
from tests.oracles import active_users_oracle

WEEK = DayWindow(BASE_DAY, BASE_DAY + timedelta(days=6))


def test_strict_filter_needs_every_day() -> None:
    events = [event("full", "a", day=d) for d in range(7)]
    events += [event("gappy", "a", day=d) for d in range(7) if d != 3]
    log = filter_active_users(normalize(events))

    assert log.users == ["full"]
    assert log.window == WEEK


def test_fraction_mode() -> None:
    events = [event("full", "a", day=d) for d in range(10)]
    events += [event("most", "a", day=d) for d in range(8)]
    events += [event("few", "a", day=d) for d in range(3)]
    log = filter_active_users(normalize(events), mode="fraction", fraction=0.8)
    assert log.users == ["full", "most"]


@pytest.mark.parametrize(
    ("mode", "fraction", "expected"),
    [("strict", 1.0, 10), ("fraction", 0.8, 8), ("fraction", 0.85, 9), ("fraction", 0.01, 1)],
)
def test_required_days(mode: str, fraction: float, expected: int) -> None:
    window = DayWindow(BASE_DAY, BASE_DAY + timedelta(days=9))
    assert required_days(window, mode, fraction) == expected  # type: ignore[arg-type]


def test_filter_matches_oracle() -> None:
    rng = random.Random(17)
    zone = "America/New_York"
    events = [event("anchor", "home", day=d, hour=17) for d in range(-2, 11)]
    for n in range(1000):
        skip = rng.random() < 0.5
        for d in range(-1, 11):
            if skip and rng.random() < 0.1:
                continue
            for _ in range(rng.randrange(1, 3)):
                events.append(event(f"u{n:04d}", f"p{rng.randrange(20)}", day=d, hour=rng.randrange(24)))

    log = normalize(events, zone)
    window = log.require_window()
    expected = active_users_oracle(events, window.first_day, window.last_day, ZoneInfo(zone))

    assert set(filter_active_users(log).users) == expected
    assert "anchor" in expected


def test_profile_active_days() -> None:
    events = [event("u1", "a", day=0), event("u1", "b", day=0), event("u1", "a", day=2)]
    profile = activity_profile(events, WEEK)

    assert profile.active_days == frozenset({BASE_DAY, BASE_DAY + timedelta(days=2)})
    assert profile.d_total == 2
    assert activity_profile(events, WEEK, d_total_mode="window-span").d_total == 7


def test_profile_counts_every_day_a_stay_touches() -> None:
    overnight = stay("u1", "home", at(day=0, hour=22), 180)
    profile = activity_profile([overnight], WEEK)
    assert profile.active_days == frozenset({BASE_DAY, BASE_DAY + timedelta(days=1)})


def test_profile_stay_ending_at_midnight_touches_one_day() -> None:
    evening = stay("u1", "home", at(day=0, hour=22), 120)
    assert activity_profile([evening], WEEK).d_total == 1


def test_profile_rejects_bad_input() -> None:
    with pytest.raises(ContractViolation):
        activity_profile([], WEEK)
    with pytest.raises(ContractViolation, match="one user"):
        activity_profile([event("u1", "a"), event("u2", "a")], WEEK)
    with pytest.raises(ContractViolation, match="outside the window"):
        activity_profile([event("u1", "a", day=9)], WEEK)


def test_filter_needs_a_window() -> None:
    with pytest.raises(ContractViolation):
        filter_active_users(normalize([]))


def test_window_days() -> None:
    assert WEEK.days == 7
    assert date(2024, 3, 10) in WEEK
    assert date(2024, 3, 11) not in WEEK
