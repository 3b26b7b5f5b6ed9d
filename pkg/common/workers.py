import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config.settings import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Apply fn to every item, results in input order.

    Runs inline when a single worker is configured, otherwise on a thread pool.
    """
    items = list(items)
    workers = workers or get_settings().VOS_THREADS
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"[WORKERS] {len(items)} tasks on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def progress(iterable: Iterable[T], desc: str, total: Optional[int] = None) -> Iterable[T]:
    """Wrap an iterable in a tqdm bar when progress output is enabled"""
    if not get_settings().VOS_SHOW_PROGRESS:
        return iterable
    from tqdm import tqdm

    return tqdm(iterable, desc=desc, total=total, leave=False)
