"""Scoring classifications against planted truth."""

from collections.abc import Iterable
from dataclasses import dataclass

from src.domain.classification import UserClassification
from src.errors import ContractViolation
from src.synth.generator import PlantedTruth


@dataclass(frozen=True)
class RecoveryMetrics:
    """How well a classification recovered the planted structure.

    label_accuracy is None when no user was classified into group 3.
    """

    users: int
    ht_recovered: int
    labeled_places: int
    correct_labels: int

    @property
    def ht_recovery(self) -> float:
        return self.ht_recovered / self.users

    @property
    def label_accuracy(self) -> float | None:
        if self.labeled_places == 0:
            return None
        return self.correct_labels / self.labeled_places


def evaluate_recovery(classifications: Iterable[UserClassification], truth: PlantedTruth) -> RecoveryMetrics:
    """
    Fraction of users whose ht-index matches the planted one, and EVP/OVP/MVP
    accuracy over the places of group-3 users.

    Planted places the user never visited have no classification and are
    not counted.

    Raises:
        ContractViolation: The classified users differ from the planted users
    """
    by_user = {c.user_id: c for c in classifications}
    if set(by_user) != set(truth.tiers):
        missing = sorted(set(truth.tiers) - set(by_user))[:3]
        extra = sorted(set(by_user) - set(truth.tiers))[:3]
        raise ContractViolation(f"user sets differ (missing {missing}, unexpected {extra})")
    if not by_user:
        raise ContractViolation("cannot evaluate recovery of an empty cohort")

    recovered = labeled = correct = 0
    for user_id, classification in by_user.items():
        if classification.group == truth.expected_ht[user_id]:
            recovered += 1
        planted = truth.tiers[user_id]
        for place_id, label in classification.labels.items():
            labeled += 1
            if planted.get(place_id) == label:
                correct += 1
    return RecoveryMetrics(len(by_user), recovered, labeled, correct)
