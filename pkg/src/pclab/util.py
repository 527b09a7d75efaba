"""Worker-pool plumbing shared by per-prime and per-twist loops.

PCLAB_THREADS caps the worker count; unset or 1 means plain sequential
evaluation. Results always come back in input order, so the merge is
deterministic regardless of schedule.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    raw = os.environ.get("PCLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)


def pmap(fn, items):
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
