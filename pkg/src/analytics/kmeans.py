"""One-dimensional K-means baseline for relevance classes."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.config.settings import KMeansConfig
from src.domain.relevance import RelevanceTable
from src.errors import ContractViolation
from src.workers import user_seed

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class KMeansResult:
    """Best Lloyd run: centroids ascending, labels[i] is the cluster of values[i]."""

    centroids: tuple[float, ...]
    labels: tuple[int, ...]
    inertia: float
    iterations: int
    history: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.centroids)

    def clusters(self, values: Sequence[float]) -> list[list[float]]:
        """Values of every cluster, each in ascending order."""
        out: list[list[float]] = [[] for _ in self.centroids]
        for v, label in zip(values, self.labels, strict=True):
            out[label].append(v)
        return [sorted(c) for c in out]


def _assign(x: FloatArray, centroids: FloatArray) -> NDArray[np.intp]:
    # centroids are sorted: nearest centroid via midpoints, ties to the lower cluster
    borders = (centroids[:-1] + centroids[1:]) / 2.0
    return np.searchsorted(borders, x, side="left")


def _inertia(x: FloatArray, centroids: FloatArray, labels: NDArray[np.intp]) -> float:
    return float(np.sum((x - centroids[labels]) ** 2))


def _quantile_init(x: FloatArray, k: int) -> FloatArray:
    # centres of k equal-count slices of the sorted values
    xs = np.sort(x)
    bounds = np.linspace(0, xs.size, k + 1).astype(int)
    return np.array([xs[bounds[i] : max(bounds[i + 1], bounds[i] + 1)].mean() for i in range(k)])


def _plusplus_init(x: FloatArray, k: int, rng: np.random.Generator) -> FloatArray:
    centroids = [x[rng.integers(x.size)]]
    for _ in range(1, k):
        d2 = np.min((x[:, None] - np.array(centroids)[None, :]) ** 2, axis=1)
        total = d2.sum()
        if total <= 0:
            centroids.append(x[rng.integers(x.size)])
        else:
            centroids.append(x[rng.choice(x.size, p=d2 / total)])
    return np.array(centroids, dtype=float)


def _lloyd(x: FloatArray, init: FloatArray, tol: float, max_iter: int) -> tuple[FloatArray, int, list[float]]:
    centroids = np.sort(init)
    history: list[float] = []
    iterations = 0
    for iterations in range(1, max_iter + 1):
        labels = _assign(x, centroids)
        history.append(_inertia(x, centroids, labels))

        updated = centroids.copy()
        counts = np.bincount(labels, minlength=centroids.size)
        sums = np.bincount(labels, weights=x, minlength=centroids.size)
        filled = counts > 0
        updated[filled] = sums[filled] / counts[filled]
        if not filled.all():
            # empty clusters: reseed at the points farthest from their centroids
            d2 = (x - updated[labels]) ** 2
            for j in np.flatnonzero(~filled):
                far = int(np.argmax(d2))
                updated[j] = x[far]
                d2[far] = -1.0
        updated.sort()

        shift = float(np.max(np.abs(updated - centroids)))
        centroids = updated
        if shift <= tol:
            break
    return centroids, iterations, history


def kmeans_1d(
    values: Sequence[float],
    k: int = 3,
    restarts: int = 16,
    tol: float = 1e-9,
    max_iter: int = 200,
    seed: int = 0,
) -> KMeansResult:
    """
    Lloyd's K-means on a 1-D sample, best of several seeded restarts.

    The first restart starts from quantile centres, the others from k-means++
    draws. Clusters are intervals of the sorted values, numbered by ascending
    centroid.

    Raises:
        ContractViolation: k < 1 or fewer values than clusters
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if len(values) < k:
        raise ContractViolation(f"kmeans needs at least k={k} values, got {len(values)}")

    x = np.asarray(values, dtype=float)
    rng = np.random.default_rng(seed)

    best: KMeansResult | None = None
    for restart in range(restarts):
        init = _quantile_init(x, k) if restart == 0 else _plusplus_init(x, k, rng)
        centroids, iterations, history = _lloyd(x, init, tol, max_iter)
        labels = _assign(x, centroids)
        inertia = _inertia(x, centroids, labels)
        if best is None or inertia < best.inertia:
            best = KMeansResult(
                centroids=tuple(centroids.tolist()),
                labels=tuple(int(v) for v in labels),
                inertia=inertia,
                iterations=iterations,
                history=(*history, inertia),
            )
    assert best is not None
    return best


def kmeans_classify_user(table: RelevanceTable, config: KMeansConfig, seed: int = 0) -> dict[str, int] | None:
    """
    K-means classes (1 = lowest centroid) of one user's places.

    Returns None when the user has fewer places than clusters.
    """
    if len(table) < config.k:
        return None
    result = kmeans_1d(
        table.rr_values,
        k=config.k,
        restarts=config.restarts,
        tol=config.tol,
        max_iter=config.max_iter,
        seed=user_seed(seed, table.user_id),
    )
    return {place_id: label + 1 for place_id, label in zip(table.place_ids, result.labels, strict=True)}


def kmeans_partition_tables(
    tables: Sequence[RelevanceTable], config: KMeansConfig, seed: int = 0
) -> list[dict[str, int] | None]:
    """K-means classes for a chunk of users (worker entry point)."""
    return [kmeans_classify_user(table, config, seed) for table in tables]
