"""Head/Tail breaks over heavy-tailed positive values."""

import math
from collections.abc import Sequence

from src.domain.classification import HtbResult
from src.errors import ContractViolation

HEAD_LIMIT = 0.40


def _mean(values: Sequence[float]) -> float:
    # fsum: correctly rounded sum, independent of value order
    return math.fsum(values) / len(values)


def head_tail_breaks(values: Sequence[float], head_limit: float = HEAD_LIMIT) -> HtbResult:
    """
    Classify positive values by recursive splits at the arithmetic mean.

    Each split puts values strictly above the mean in the head and the rest in
    the tail. The first split is kept whenever the head is non-empty; later
    splits only when the head is a minority (|head| / |partition| <= head_limit).
    Splitting continues into a minority head while it holds at least two
    distinct values; a majority first head ends the recursion. Classes are the successive tails plus the final head, numbered
    from 1 (lowest) upward; ht_index is the number of breaks plus one.

    Raises:
        ContractViolation: Empty input, non-positive value or head_limit outside (0, 1)
    """
    if not values:
        raise ContractViolation("head/tail breaks needs at least one value")
    if not 0.0 < head_limit < 1.0:
        raise ContractViolation(f"head_limit must be in (0, 1), got {head_limit}")
    if any(not (v > 0.0 and math.isfinite(v)) for v in values):
        raise ContractViolation("head/tail breaks needs finite positive values")

    partition = sorted(values)
    breaks: list[float] = []
    fractions: list[float] = []
    classes: list[tuple[float, ...]] = []

    while partition[0] != partition[-1]:
        mean = _mean(partition)
        head = [v for v in partition if v > mean]
        tail = [v for v in partition if v <= mean]
        if not head or not tail:
            break

        fraction = len(head) / len(partition)
        if breaks and fraction > head_limit:
            break

        breaks.append(mean)
        fractions.append(fraction)
        classes.append(tuple(tail))
        partition = head
        if fraction > head_limit:
            break

    classes.append(tuple(partition))
    return HtbResult(tuple(breaks), tuple(classes), tuple(fractions))
