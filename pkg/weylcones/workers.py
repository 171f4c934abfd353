"""
Worker pool
- ordered parallel map over independent tasks
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from . import config

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None,
                 chunksize: Optional[int] = None) -> List[R]:
    """fn over items, results in input order whatever the worker count"""
    items = list(items)
    threads = config.THREADS if threads is None else threads
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = chunksize or max(1, len(items) // (threads * 8))
    logger.debug('mapping %d tasks over %d workers (chunks of %d)', len(items), threads, chunksize)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
