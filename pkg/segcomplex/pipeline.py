from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterator, List, Sequence, TypeVar

from segcomplex.errors import NetpbmError, SegcError, ValidationError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_items(func: Callable[[T], R], items: Sequence[T], *, jobs: int = 1) -> List[R]:
    """
    Shared per-item map for all dataset commands.

    Results come back in input order regardless of ``jobs``, so any reduction over them is
    order-stable. The first failing item's exception propagates unchanged.
    """
    if jobs < 1:
        raise ValidationError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.debug("Mapping %d item(s) over %d worker(s)", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


@contextmanager
def labelled(label: str) -> Iterator[None]:
    """Re-raise a library failure as the same error class with ``label`` in front of its message."""
    try:
        yield
    except NetpbmError:
        # Decoder errors already lead with the file path.
        raise
    except SegcError as exc:
        if label in str(exc):
            raise
        raise type(exc)(f"{label}: {exc}") from exc
