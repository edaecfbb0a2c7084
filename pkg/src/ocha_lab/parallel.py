"""Optional process parallelism, capped by ``OCHA_LAB_THREADS``."""

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import ArgumentError

ENV = "OCHA_LAB_THREADS"


def max_workers():
    """Worker cap from the environment; unset or empty means 1."""
    raw = os.environ.get(ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ArgumentError(f"{ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ArgumentError(f"{ENV} must be a positive integer, got {raw!r}")
    return n


def pmap(fn, items, workers=None):
    """``[fn(x) for x in items]``, in order, over at most ``workers``
    processes.  Results do not depend on the worker count."""
    items = list(items)
    workers = max_workers() if workers is None else workers
    workers = min(workers, len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
