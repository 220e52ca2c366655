"""Tests for chunked fan-out helpers."""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from src.workers import chunked, map_chunked, user_seed


def squares(items: Sequence[int]) -> list[int]:
    return [i * i for i in items]


def test_chunked_sizes() -> None:
    parts = chunked(list(range(10)), 3)
    assert [list(p) for p in parts] == [[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert chunked([], 4) == []
    assert len(chunked([1, 2], 8)) == 2


def test_map_chunked_keeps_order() -> None:
    items = list(range(37))
    with ThreadPoolExecutor(max_workers=3) as pool:
        assert map_chunked(squares, items, workers=3, executor=pool) == squares(items)
    assert map_chunked(squares, items, workers=2) == squares(items)


def test_user_seed_stable() -> None:
    assert user_seed(1, "u1") == user_seed(1, "u1")
    assert user_seed(1, "u1") != user_seed(2, "u1")
    assert user_seed(1, "u1") != user_seed(1, "u2")
    assert 0 <= user_seed(0, "x") < 2**64
