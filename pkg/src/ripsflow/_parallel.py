"""Deterministic chunked execution over index ranges."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable


def chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total)) if total else 1
    step, extra = divmod(total, workers)
    out, start = [], 0
    for w in range(workers):
        stop = start + step + (1 if w < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def run_chunks(total: int, workers: int, fn: Callable[[int, int], None]) -> None:
    """Call ``fn(start, stop)`` over a partition of ``range(total)``.

    Each call must write only to its own slice, so the result does not depend
    on scheduling or on the number of workers.
    """
    bounds = chunk_bounds(total, workers)
    if len(bounds) == 1:
        fn(*bounds[0])
        return
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        for fut in [pool.submit(fn, a, b) for a, b in bounds]:
            fut.result()
