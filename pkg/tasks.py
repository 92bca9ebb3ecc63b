"""
Worker pool for phase-diagram sweeps and blocking computations behind the API.
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config import SWEEP_WORKERS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Shared pool for API requests, created on first use
_executor: Optional[ThreadPoolExecutor] = None


def run_parallel(func: Callable[[T], R], items: Iterable[T], max_workers: Optional[int] = None) -> List[R]:
    """Apply `func` to every item on a thread pool; results keep input order."""
    items = list(items)
    workers = max(1, min(max_workers or SWEEP_WORKERS, len(items) or 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(func, items))
    logger.debug("evaluated %d items on %d workers", len(items), workers)
    return results


async def run_blocking(func: Callable[..., R], *args, **kwargs) -> R:
    """Run a CPU-bound call on the shared pool without blocking the event loop."""
    global _executor
    if _executor is None:
        _executor = ThreadPoolExecutor(max_workers=SWEEP_WORKERS)
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(_executor, lambda: func(*args, **kwargs))


def shutdown_pool():
    global _executor
    if _executor is not None:
        _executor.shutdown(wait=False)
        _executor = None
