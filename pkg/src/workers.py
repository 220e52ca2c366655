"""Chunked fan-out of per-user work over a process pool."""

import hashlib
from collections.abc import Callable, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import TypeVar

from src.logger.logger import get_logger
from src.logger.types import Category, param

T = TypeVar("T")
R = TypeVar("R")


def user_seed(seed: int, user_id: str) -> int:
    """Stable per-user seed derived from the run seed, independent of processing order."""
    digest = hashlib.blake2b(f"{seed}:{user_id}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def chunked(items: Sequence[T], chunks: int) -> list[Sequence[T]]:
    """Split items into at most `chunks` contiguous slices of near-equal size."""
    if not items:
        return []
    chunks = max(1, min(chunks, len(items)))
    size, extra = divmod(len(items), chunks)
    out: list[Sequence[T]] = []
    start = 0
    for i in range(chunks):
        end = start + size + (1 if i < extra else 0)
        out.append(items[start:end])
        start = end
    return out


def map_chunked(
    fn: Callable[[Sequence[T]], list[R]],
    items: Sequence[T],
    workers: int = 1,
    executor: Executor | None = None,
) -> list[R]:
    """
    Apply a chunk function to items, serially or across worker processes.

    Results come back in item order, so the output does not depend on the
    worker count. `fn` must be a picklable module-level callable.

    Args:
        fn: Function mapping a slice of items to one result per item
        items: Work items
        workers: Process count; 1 runs in the calling process
        executor: Optional pre-built executor (owned by the caller)

    Returns:
        One result per item, in input order
    """
    if workers <= 1 and executor is None:
        return fn(items)

    parts = chunked(items, workers * 4)
    get_logger().with_category(Category.PIPELINE).debug(
        "dispatching chunks", param("chunks", len(parts)), param("workers", workers)
    )
    if executor is not None:
        return [r for part in executor.map(fn, parts) for r in part]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for part in pool.map(fn, parts) for r in part]
