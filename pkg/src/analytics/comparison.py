"""Head/Tail breaks versus K-means on the same cohort."""

import math
from collections import Counter, defaultdict
from collections.abc import Mapping, Sequence
from functools import partial

from scipy.special import comb

from src.analytics.kmeans import kmeans_partition_tables
from src.config.settings import KMeansConfig
from src.domain.analytics import ComparisonReport
from src.domain.classification import UserClassification
from src.errors import ContractViolation
from src.workers import map_chunked

Partition = Mapping[str, int]


def rand_index(first: Partition, second: Partition) -> float:
    """
    Pair-counting agreement of two partitions of the same places.

    Fraction of place pairs on which both partitions agree (same class in
    both, or different classes in both). A single place agrees trivially.
    """
    if first.keys() != second.keys():
        raise ContractViolation("partitions cover different places")
    n = len(first)
    pairs = int(comb(n, 2, exact=True))
    if pairs == 0:
        return 1.0

    joint = Counter((first[p], second[p]) for p in first)
    same_both = sum(int(comb(m, 2, exact=True)) for m in joint.values())
    same_first = sum(int(comb(m, 2, exact=True)) for m in Counter(first.values()).values())
    same_second = sum(int(comb(m, 2, exact=True)) for m in Counter(second.values()).values())
    agreeing = pairs + 2 * same_both - same_first - same_second
    return agreeing / pairs


def kmeans_partitions(
    cohort: Sequence[UserClassification], config: KMeansConfig, seed: int = 0, workers: int = 1
) -> list[dict[str, int] | None]:
    """K-means classes of every user in cohort order; None for users with fewer than k places."""
    tables = [c.table for c in cohort]
    return map_chunked(partial(kmeans_partition_tables, config=config, seed=seed), tables, workers)


def compare_htb_kmeans(
    cohort: Sequence[UserClassification],
    config: KMeansConfig | None = None,
    seed: int = 0,
    workers: int = 1,
    partitions: Sequence[Partition | None] | None = None,
) -> ComparisonReport:
    """
    Coverage of both methods and their agreement on commonly classified users.

    Every user with a relevance table is classified by Head/Tail breaks;
    K-means only covers users with at least k places.

    Args:
        cohort: HTB-classified users
        config: K-means parameters
        seed: Run seed (per-user seeds derive from it)
        workers: Process count for the K-means runs
        partitions: Precomputed K-means classes aligned with `cohort`

    Raises:
        ContractViolation: Empty cohort or misaligned partitions
    """
    if not cohort:
        raise ContractViolation("cannot compare classifiers on an empty cohort")
    config = config or KMeansConfig()
    if partitions is None:
        partitions = kmeans_partitions(cohort, config, seed, workers)
    if len(partitions) != len(cohort):
        raise ContractViolation("k-means partitions do not align with the cohort")

    scores: list[float] = []
    by_group: dict[int, list[float]] = defaultdict(list)
    cluster_counts: Counter[int] = Counter()
    for user, partition in zip(cohort, partitions, strict=True):
        if partition is None:
            continue
        score = rand_index(user.htb.class_of, partition)
        scores.append(score)
        by_group[user.group].append(score)
        cluster_counts[len(set(partition.values()))] += 1

    users = len(cohort)
    return ComparisonReport(
        users=users,
        k=config.k,
        htb_coverage=sum(1 for c in cohort if c.htb.class_of) / users,
        kmeans_coverage=len(scores) / users,
        common_users=len(scores),
        agreement=math.fsum(scores) / len(scores) if scores else None,
        agreement_by_group={g: math.fsum(v) / len(v) for g, v in sorted(by_group.items())},
        kmeans_clusters=dict(sorted(cluster_counts.items())),
    )
