"""Synthetic cohorts with planted relevance structure."""

from src.synth.generator import PlantedTruth, SyntheticCohort, generate_cohort, truth_histogram, user_ids
from src.synth.recovery import RecoveryMetrics, evaluate_recovery
from src.synth.spec import CohortSpec, TierSpec, load_cohort_spec

__all__ = [
    "CohortSpec",
    "PlantedTruth",
    "RecoveryMetrics",
    "SyntheticCohort",
    "TierSpec",
    "evaluate_recovery",
    "generate_cohort",
    "load_cohort_spec",
    "truth_histogram",
    "user_ids",
]
