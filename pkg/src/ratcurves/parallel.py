"""Order-preserving parallel map used by the scanners."""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, items, threads: int = 1) -> list:
    """``[fn(x) for x in items]`` computed by up to ``threads`` worker processes.

    Results come back in input order, so any merge over them is independent of
    the worker count.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=min(threads, len(items)), mp_context=ctx) as pool:
        return list(pool.map(fn, items))
