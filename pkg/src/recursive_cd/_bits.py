"""Small helpers for vertex sets encoded as Python integers (one bit per vertex)."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def submasks(mask: int) -> Iterator[int]:
    """Every submask of ``mask`` including 0 and ``mask`` itself (order unspecified)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets(items: Iterable[int], min_size: int = 0, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
    """Subsets of ``items`` by increasing cardinality, lexicographic within a size."""
    pool = sorted(items)
    top = len(pool) if max_size is None else min(max_size, len(pool))
    for k in range(max(min_size, 0), top + 1):
        yield from combinations(pool, k)
