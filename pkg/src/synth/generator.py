"""Synthetic cohorts with planted relevance tiers."""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import UTC, datetime, timedelta
from functools import partial

import numpy as np
import polars as pl
from numpy.typing import NDArray

from src.config.settings import resolve_timezone
from src.domain.classification import PlaceLabel
from src.domain.events import AssocEvent, AssocKind, DayWindow, utc_from_epoch
from src.ingest.log import EVENT_SCHEMA, AssocBatch, EventBatch, EventLog
from src.ingest.normalize import normalize
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.synth.spec import CohortSpec, TierSpec
from src.workers import map_chunked, user_seed

SHAPE = 4.0  # gamma shape of stay durations


@dataclass(frozen=True)
class PlantedTruth:
    """Tier and visit probability of every generated place, per user."""

    tiers: dict[str, dict[str, PlaceLabel]]
    probabilities: dict[str, dict[str, float]]
    expected_ht: dict[str, int]

    @property
    def users(self) -> list[str]:
        return sorted(self.tiers)

    def rows(self) -> list[tuple[str, str, PlaceLabel]]:
        """(user_id, place_id, tier) ordered by user then place."""
        return [
            (user_id, place_id, tier)
            for user_id in self.users
            for place_id, tier in sorted(self.tiers[user_id].items())
        ]


@dataclass(frozen=True)
class SyntheticCohort:
    """Generated dataset plus its planted truth.

    Exactly one of event_log (cdr mode) and associations (wifi mode) is set.
    visit_days[u][p] is the number of days the generator planted a visit.
    """

    spec: CohortSpec
    seed: int
    truth: PlantedTruth
    event_log: EventLog | None = None
    associations: AssocBatch | None = None
    visit_days: dict[str, dict[str, int]] = field(default_factory=dict)


@dataclass
class _UserTrace:
    user_id: str
    places: list[str]
    tiers: list[PlaceLabel]
    probs: list[float]
    tallies: list[int]
    place_ids: list[str] = field(default_factory=list)
    stamps: list[int] = field(default_factory=list)
    channels: list[str] = field(default_factory=list)
    assoc: list[AssocEvent] = field(default_factory=list)


def _day_bounds(spec: CohortSpec) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """Epoch seconds of each local day start and the day's length."""
    zone = resolve_timezone(spec.timezone)
    starts = []
    for i in range(spec.window_days + 1):
        day = spec.start_day + timedelta(days=i)
        starts.append(int(datetime(day.year, day.month, day.day, tzinfo=zone).astimezone(UTC).timestamp()))
    edges = np.array(starts, dtype=np.int64)
    return edges[:-1], np.diff(edges)


def user_ids(spec: CohortSpec) -> list[str]:
    width = max(4, len(str(spec.user_count - 1)))
    return [f"u{i:0{width}d}" for i in range(spec.user_count)]


def _generate_user(spec: CohortSpec, seed: int, user_id: str) -> _UserTrace:
    rng = np.random.default_rng(user_seed(seed, user_id))
    width = len(str(spec.place_pool - 1))

    tier_specs: list[tuple[PlaceLabel, TierSpec]] = [(t, s) for t, s in spec.tiers.items() if s.count]
    picked = rng.choice(spec.place_pool, size=spec.places_per_user, replace=False)
    places = [f"p{i:0{width}d}" for i in picked.tolist()]
    tiers = [t for t, s in tier_specs for _ in range(s.count)]
    probs = np.concatenate([rng.uniform(s.p_min, s.p_max, size=s.count) for _, s in tier_specs])

    visits = rng.random((spec.window_days, len(places))) < probs
    if spec.daily_activity and spec.mode == "cdr":
        # a day without any visit gets one at the most probable place (first MVP)
        visits[~visits.any(axis=1), int(np.argmax(probs))] = True

    trace = _UserTrace(
        user_id=user_id,
        places=places,
        tiers=tiers,
        probs=probs.tolist(),
        tallies=visits.sum(axis=0).tolist(),
    )
    day_starts, day_lengths = _day_bounds(spec)
    if spec.mode == "cdr":
        _emit_events(trace, spec, rng, visits, day_starts, day_lengths)
    else:
        means = np.array([spec.tiers[t].duration_minutes * 60.0 for t in tiers])
        _emit_associations(trace, rng, visits, means, day_starts, day_lengths)
    return trace


def _emit_events(
    trace: _UserTrace,
    spec: CohortSpec,
    rng: np.random.Generator,
    visits: NDArray[np.bool_],
    day_starts: NDArray[np.int64],
    day_lengths: NDArray[np.int64],
) -> None:
    days, cols = np.nonzero(visits)
    offsets = np.floor(rng.random(days.size) * day_lengths[days]).astype(np.int64)
    mix = sorted(spec.channel_mix.items())
    weights = np.array([w for _, w in mix], dtype=float)
    picks = rng.choice(len(mix), size=days.size, p=weights / weights.sum())

    trace.place_ids = [trace.places[c] for c in cols.tolist()]
    trace.stamps = (day_starts[days] + offsets).tolist()
    trace.channels = [mix[i][0].value for i in picks.tolist()]


def _emit_associations(
    trace: _UserTrace,
    rng: np.random.Generator,
    visits: NDArray[np.bool_],
    means: NDArray[np.float64],
    day_starts: NDArray[np.int64],
    day_lengths: NDArray[np.int64],
) -> None:
    # each visit of the day gets its own slot, so stays never overlap
    for day in range(visits.shape[0]):
        cols = rng.permutation(np.flatnonzero(visits[day]))
        if cols.size == 0:
            continue
        slot = int(day_lengths[day]) // cols.size
        for j, col in enumerate(cols.tolist()):
            duration = int(rng.gamma(SHAPE, means[col] / SHAPE))
            duration = min(max(duration, 1), slot - 2)
            start = int(day_starts[day]) + j * slot + int(rng.integers(0, slot - duration))
            place = trace.places[col]
            trace.assoc.append(AssocEvent(trace.user_id, place, utc_from_epoch(start), AssocKind.ASSOC))
            trace.assoc.append(
                AssocEvent(trace.user_id, place, utc_from_epoch(start + duration), AssocKind.DISASSOC)
            )


def _generate_users(ids: Sequence[str], spec: CohortSpec, seed: int) -> list[_UserTrace]:
    return [_generate_user(spec, seed, user_id) for user_id in ids]


def generate_cohort(spec: CohortSpec, seed: int | None = None, workers: int = 1) -> SyntheticCohort:
    """
    Generate a cohort with planted MVP/OVP/EVP tiers.

    Every (place, day) is visited independently with the place's planted
    probability. In cdr mode each visit is one event at a uniform time of the
    day; in wifi mode it is an assoc/disassoc pair whose duration is gamma
    distributed around the tier mean. Users are seeded from (seed, user_id),
    so the output does not depend on `workers`.

    Args:
        spec: Validated cohort spec
        seed: Overrides spec.seed
        workers: Process count

    Returns:
        SyntheticCohort with the dataset, planted truth and visit tallies
    """
    seed = spec.seed if seed is None else seed
    traces = map_chunked(partial(_generate_users, spec=spec, seed=seed), user_ids(spec), workers)

    expected = spec.expected_ht_index
    truth = PlantedTruth(
        tiers={t.user_id: dict(zip(t.places, t.tiers, strict=True)) for t in traces},
        probabilities={t.user_id: dict(zip(t.places, t.probs, strict=True)) for t in traces},
        expected_ht={t.user_id: expected for t in traces},
    )
    tallies = {t.user_id: dict(zip(t.places, t.tallies, strict=True)) for t in traces}

    window = DayWindow(spec.start_day, spec.start_day + timedelta(days=spec.window_days - 1))
    if spec.mode == "cdr":
        frame = pl.DataFrame(
            {
                "user_id": [t.user_id for t in traces for _ in t.stamps],
                "place_id": [p for t in traces for p in t.place_ids],
                "ts": [s for t in traces for s in t.stamps],
                "channel": [c for t in traces for c in t.channels],
            },
            schema=EVENT_SCHEMA,
        )
        event_log = normalize(EventBatch(frame), spec.timezone, window)
        size = len(event_log)
        cohort = SyntheticCohort(spec, seed, truth, event_log=event_log, visit_days=tallies)
    else:
        associations = AssocBatch(a for t in traces for a in t.assoc)
        size = len(associations)
        cohort = SyntheticCohort(spec, seed, truth, associations=associations, visit_days=tallies)

    get_logger().with_category(Category.SYNTH).info(
        "cohort generated",
        param("mode", spec.mode),
        param("users", spec.user_count),
        param("days", spec.window_days),
        param("records", size),
        param("seed", seed),
    )
    return cohort


def truth_histogram(truth: PlantedTruth) -> dict[int, int]:
    """Planted ht-index histogram (users per expected group)."""
    return dict(sorted(Counter(truth.expected_ht.values()).items()))
