import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads=None):
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return int(threads)


def ordered_map(fn, items, threads=None):
    """Map ``fn`` over ``items`` and return results in input order.

    The output order never depends on the worker count, so reductions over
    the result list are reproducible between serial and threaded runs.
    """
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
