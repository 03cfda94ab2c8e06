"""Order-preserving map with optional process parallelism.

``COVLAB_THREADS`` caps the number of worker processes; unset or 1 means
serial evaluation.  Results are always returned in input order, so output
never depends on scheduling.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("COVLAB_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable, items: Iterable, chunksize: int = 64) -> list:
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
