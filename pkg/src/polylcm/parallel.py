"""Index-ordered map over an optional process pool."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, Sequence


def map_indexed(fn: Callable[..., Any], indices: Iterable[int], args: Sequence[Any] = (), workers: int = 1) -> list:
    """[fn(i, *args) for i in indices], collated by index whatever the worker count."""
    indices = list(indices)
    if workers <= 1 or len(indices) < 2:
        return [fn(i, *args) for i in indices]
    chunk = max(1, len(indices) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, [(fn, i, args) for i in indices], chunksize=chunk))


def _call(job):
    fn, i, args = job
    return fn(i, *args)
