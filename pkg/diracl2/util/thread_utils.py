from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "DIRACL2_THREADS"


def resolve_workers(requested: Optional[int] = None) -> int:
    """Worker count: explicit request, capped by DIRACL2_THREADS, at least 1."""
    cap = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            pass
    if requested is None or requested <= 0:
        return cap
    return max(1, min(int(requested), cap))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Map fn over items, results in input order regardless of worker count.
    """
    items = list(items)
    n_workers = resolve_workers(workers)
    if n_workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n_workers, len(items))) as pool:
        return list(pool.map(fn, items))
