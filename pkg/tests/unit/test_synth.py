"""Tests for synthetic cohorts and recovery scoring."""

import math
import random
from collections import Counter
from pathlib import Path

import polars as pl
import pytest
from pydantic import ValidationError

from src.domain.classification import PlaceLabel
from src.errors import ConfigError, ContractViolation
from src.htb import classify_cohort
from src.preprocess import extract_stays, pair_sessions
from src.relevance import cohort_relevance
from src.synth import (
    CohortSpec,
    PlantedTruth,
    TierSpec,
    evaluate_recovery,
    generate_cohort,
    load_cohort_spec,
    truth_histogram,
    user_ids,
)


def small_spec(**kwargs: object) -> CohortSpec:
    base: dict[str, object] = {"user_count": 6, "window_days": 30, "place_pool": 200}
    base.update(kwargs)
    return CohortSpec.model_validate(base)


def test_default_spec() -> None:
    spec = CohortSpec()
    assert spec.places_per_user == 57
    assert spec.expected_ht_index == 3
    assert list(spec.tiers) == [PlaceLabel.MVP, PlaceLabel.OVP, PlaceLabel.EVP]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"mvp": {"count": 2, "p_min": 0.9, "p_max": 0.5, "duration_minutes": 60}},
        {"evp": {"count": 1, "p_min": 0.0, "p_max": 0.1, "duration_minutes": 60}},
        {"place_pool": 10},
        {"channel_mix": {"wifi": 1.0}},
        {"channel_mix": {"call": 0.0}},
        {"timezone": "Mars/Olympus"},
        {"user_count": 0},
        {"unknown": 1},
    ],
)
def test_invalid_spec(kwargs: dict[str, object]) -> None:
    with pytest.raises(ValidationError):
        small_spec(**kwargs)


def test_no_places_rejected() -> None:
    empty = {"count": 0, "p_min": 0.1, "p_max": 0.1, "duration_minutes": 1}
    with pytest.raises(ValidationError, match="no places"):
        small_spec(mvp=empty, ovp=empty, evp=empty)


def test_wifi_place_limit() -> None:
    many = {"count": 1500, "p_min": 0.01, "p_max": 0.01, "duration_minutes": 10}
    small_spec(evp=many, place_pool=2000)
    with pytest.raises(ValidationError, match="at most 1440"):
        small_spec(mode="wifi", evp=many, place_pool=2000)


def test_load_spec_file(tmp_path: Path) -> None:
    path = tmp_path / "cohort.yaml"
    path.write_text("user_count: 12\nmode: wifi\nseed: 3\n")

    assert load_cohort_spec(path).user_count == 12
    assert load_cohort_spec(path, seed=9).seed == 9
    assert load_cohort_spec().user_count == 500


def test_load_spec_errors(tmp_path: Path) -> None:
    path = tmp_path / "cohort.yaml"
    path.write_text("user_count: -1\n")
    with pytest.raises(ConfigError, match="invalid cohort spec"):
        load_cohort_spec(path)
    with pytest.raises(ConfigError):
        load_cohort_spec(tmp_path / "missing.yaml")


def test_user_ids() -> None:
    assert user_ids(small_spec(user_count=3)) == ["u0000", "u0001", "u0002"]
    assert user_ids(small_spec(user_count=12_000, place_pool=5000))[-1] == "u11999"


def test_certain_places_have_rr_one() -> None:
    spec = small_spec(mvp=TierSpec(count=2, p_min=1.0, p_max=1.0, duration_minutes=60))
    cohort = generate_cohort(spec)
    assert cohort.event_log is not None

    for table in cohort_relevance(cohort.event_log):
        mvp = [p for p, t in cohort.truth.tiers[table.user_id].items() if t is PlaceLabel.MVP]
        assert [table.rr_of(p) for p in mvp] == [1.0, 1.0]


def test_daily_activity_covers_every_day() -> None:
    sparse = {"count": 3, "p_min": 0.05, "p_max": 0.05, "duration_minutes": 30}
    spec = small_spec(mvp=sparse, ovp=sparse, evp=sparse)
    log = generate_cohort(spec).event_log
    assert log is not None

    days = log.frame.group_by("user_id").agg(pl.col("day").n_unique().alias("n"))
    assert log.require_window().days == 30
    assert set(days.get_column("n").to_list()) == {30}


def test_deterministic_per_seed() -> None:
    spec = small_spec()
    first = generate_cohort(spec, seed=4)
    again = generate_cohort(spec, seed=4)
    other = generate_cohort(spec, seed=5)

    assert first.event_log == again.event_log
    assert first.truth == again.truth
    assert first.event_log != other.event_log


def test_parallel_generation_matches_serial() -> None:
    spec = small_spec(user_count=20)
    assert generate_cohort(spec, workers=2).event_log == generate_cohort(spec).event_log

    wifi = small_spec(mode="wifi", user_count=20)
    assert list(generate_cohort(wifi, workers=2).associations or []) == list(
        generate_cohort(wifi).associations or []
    )


def test_visit_frequencies_concentrate() -> None:
    spec = small_spec(
        user_count=5,
        window_days=365,
        daily_activity=False,
        mvp=TierSpec(count=2, p_min=0.5, p_max=0.5, duration_minutes=60),
        ovp=TierSpec(count=5, p_min=0.3, p_max=0.3, duration_minutes=60),
        evp=TierSpec(count=50, p_min=0.05, p_max=0.05, duration_minutes=60),
    )
    cohort = generate_cohort(spec)

    for user_id, tallies in cohort.visit_days.items():
        for place_id, days in tallies.items():
            p = cohort.truth.probabilities[user_id][place_id]
            assert abs(days / 365 - p) <= 5 * math.sqrt(p * (1 - p) / 365)


def test_wifi_stays_follow_tier_durations(wifi_spec: CohortSpec) -> None:
    cohort = generate_cohort(wifi_spec.model_copy(update={"user_count": 10}))
    assert cohort.associations is not None and cohort.event_log is None

    stays = pair_sessions(cohort.associations)
    assert all(not s.open_ended for s in stays)
    means: dict[PlaceLabel, list[float]] = {label: [] for label in PlaceLabel}
    for s in stays:
        means[cohort.truth.tiers[s.user_id][s.place_id]].append(s.duration)
    avg = {label: sum(v) / len(v) for label, v in means.items()}
    assert avg[PlaceLabel.EVP] < avg[PlaceLabel.OVP] < avg[PlaceLabel.MVP]


def test_crisp_cohort_is_recovered(crisp_spec: CohortSpec) -> None:
    cohort = generate_cohort(crisp_spec)
    assert cohort.event_log is not None
    classified = classify_cohort(cohort_relevance(cohort.event_log))

    metrics = evaluate_recovery(classified, cohort.truth)

    assert metrics.users == 40
    assert metrics.ht_recovery == 1.0
    assert metrics.label_accuracy == 1.0
    assert truth_histogram(cohort.truth) == {3: 40}


def test_shuffled_truth_scores_at_chance(crisp_spec: CohortSpec) -> None:
    cohort = generate_cohort(crisp_spec)
    classified = classify_cohort(cohort_relevance(cohort.event_log))  # type: ignore[arg-type]

    # tiers permuted within each user: same tier sizes, no link to visits
    rng = random.Random(5)
    shuffled: dict[str, dict[str, PlaceLabel]] = {}
    for user_id, tiers in sorted(cohort.truth.tiers.items()):
        places = sorted(tiers)
        labels = [tiers[p] for p in places]
        rng.shuffle(labels)
        shuffled[user_id] = dict(zip(places, labels, strict=True))
    truth = PlantedTruth(shuffled, {}, dict(cohort.truth.expected_ht))

    # a labeled place matches a random tier with probability |tier| / |places|
    expected, labeled = 0.0, 0
    for c in classified:
        sizes = Counter(cohort.truth.tiers[c.user_id].values())
        total = sum(sizes.values())
        for label in c.labels.values():
            expected += sizes[label] / total
            labeled += 1
    chance = expected / labeled

    metrics = evaluate_recovery(classified, truth)
    assert metrics.label_accuracy is not None
    assert metrics.label_accuracy == pytest.approx(chance, abs=0.05)
    assert chance < 0.9
    assert evaluate_recovery(classified, cohort.truth).label_accuracy == 1.0


def test_recovery_rejects_mismatched_users(crisp_spec: CohortSpec) -> None:
    cohort = generate_cohort(crisp_spec.model_copy(update={"user_count": 3}))
    classified = classify_cohort(cohort_relevance(cohort.event_log))  # type: ignore[arg-type]
    with pytest.raises(ContractViolation, match="user sets differ"):
        evaluate_recovery(classified[:2], cohort.truth)
    with pytest.raises(ContractViolation):
        evaluate_recovery([], PlantedTruth({}, {}, {}))


def test_wifi_significant_stays_are_kept(wifi_spec: CohortSpec) -> None:
    cohort = generate_cohort(wifi_spec.model_copy(update={"user_count": 5}))
    assert cohort.associations is not None
    stays = pair_sessions(cohort.associations)
    kept = extract_stays(stays)
    assert 0 < len(kept) <= len(stays)
    assert all(s.duration > 900 for s in kept)
