"""
Worker Pool

Thread fan-out for the embarrassingly parallel scans (per-variable niceness
checks, incidence point chunks, Cartesian-product blocks). Results always
come back in input order so the merged output does not depend on the
worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from config import thread_count

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit worker count, else the FFEXPAND_THREADS cap."""
    if workers is None:
        return thread_count()
    return max(1, int(workers))


def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> list[R]:
    items = list(items)
    workers = resolve_workers(workers)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
