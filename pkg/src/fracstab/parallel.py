"""Deterministic tiled execution for raster work.

Tile geometry is fixed up front and never depends on the worker count, so
per-pixel arithmetic is identical whether tiles run serially or concurrently.
Workers write disjoint slices of preallocated outputs; there are no
floating-point reductions across tiles.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

__all__ = ["TILE_ROWS", "row_spans", "run_spans"]

TILE_ROWS = 8


def row_spans(n_rows: int, tile_rows: int = TILE_ROWS) -> list[tuple[int, int]]:
    return [(lo, min(lo + tile_rows, n_rows)) for lo in range(0, n_rows, tile_rows)]


def run_spans(spans: list[tuple[int, int]], worker: Callable[[int, int], None], threads: int) -> None:
    """Run ``worker(lo, hi)`` over every span, serially or on a thread pool.

    ``threads == 1`` runs inline; ``threads == 0`` uses one worker per CPU.
    """
    if threads < 0:
        raise ValueError("threads must be >= 0")
    if threads == 1 or len(spans) == 1:
        for lo, hi in spans:
            worker(lo, hi)
        return
    max_workers = threads if threads > 0 else (os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(worker, lo, hi) for lo, hi in spans]
        for fut in futures:
            fut.result()
