"""
Small numerical helpers shared by the services: sign-scan bracketing, root
polishing, seeded generators and the sweep worker pool.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from scipy.optimize import brentq

from core.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def sign_change_brackets(
    f: Callable[[float], float], grid: Sequence[float]
) -> list[tuple[float, float]]:
    """Adjacent grid intervals on which f changes sign (non-finite values break brackets)."""
    brackets: list[tuple[float, float]] = []
    prev_x, prev_f = None, None
    for x in grid:
        fx = f(float(x))
        if not math.isfinite(fx):
            prev_x, prev_f = None, None
            continue
        if prev_f is not None:
            if fx == 0.0:
                brackets.append((float(x), float(x)))
            elif prev_f != 0.0 and (prev_f < 0.0) != (fx < 0.0):
                brackets.append((prev_x, float(x)))
        prev_x, prev_f = float(x), fx
    return brackets


def bisect_root(
    f: Callable[[float], float], lo: float, hi: float, width: float = 1e-12
) -> float:
    """Root of f in [lo, hi] to a bracket width of ``width``."""
    if lo == hi:
        return lo
    return float(brentq(f, lo, hi, xtol=width, rtol=4 * np.finfo(float).eps, maxiter=500))


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator; the bit generator is pinned so sweeps reproduce."""
    return np.random.Generator(np.random.PCG64DXSM(seed))


def worker_count() -> int:
    return max(1, int(get_settings().THREADS))


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map over ``items`` preserving order, fanned out when THREADS > 1."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    logger.debug(f"Fanning {len(items)} evaluations out over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
