"""Deterministic fan-out over worker processes."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def chunked(items: Sequence[T], n_chunks: int) -> list[Sequence[T]]:
    n_chunks = max(1, min(n_chunks, len(items)))
    size = -(-len(items) // n_chunks) if items else 0
    return [items[i : i + size] for i in range(0, len(items), size)] if items else []


def map_chunks(func: Callable[[Sequence[T]], list[R]], items: Sequence[T], threads: int = 1) -> list[R]:
    """Apply func to contiguous chunks and concatenate the results in input order."""
    if threads <= 1 or len(items) < 2:
        return list(func(items))
    # more chunks than workers smooths out uneven per-item cost
    chunks = chunked(items, threads * 4)
    out: list[R] = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(func, chunks):
            out.extend(part)
    return out
