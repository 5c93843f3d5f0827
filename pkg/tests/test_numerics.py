"""
Unit tests for the shared numerical helpers.
"""

import math
import threading

import pytest

from core.config import clear_config_caches
from utils import numerics


class TestBrackets:
    """Sign scans over a grid."""

    def test_single_crossing(self):
        grid = [0.0, 0.5, 1.0, 1.5, 2.0]
        assert numerics.sign_change_brackets(lambda x: x - 1.2, grid) == [(1.0, 1.5)]

    def test_exact_zero(self):
        brackets = numerics.sign_change_brackets(lambda x: x - 1.0, [0.0, 1.0, 2.0])
        assert brackets == [(1.0, 1.0)]

    def test_non_finite_breaks_bracket(self):
        def f(x):
            return math.nan if x == 1.0 else x - 1.2

        assert numerics.sign_change_brackets(f, [0.0, 1.0, 2.0]) == []

    def test_no_crossing(self):
        assert numerics.sign_change_brackets(lambda x: x * x + 1.0, [-1.0, 0.0, 1.0]) == []


class TestBisectRoot:
    def test_polishes(self):
        root = numerics.bisect_root(lambda x: x * x - 2.0, 1.0, 2.0)
        assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_degenerate_bracket(self):
        assert numerics.bisect_root(lambda x: x, 0.3, 0.3) == 0.3


class TestRng:
    def test_reproducible(self):
        first = numerics.make_rng(7).uniform(size=5)
        second = numerics.make_rng(7).uniform(size=5)
        assert list(first) == list(second)


class TestParallelMap:
    """Order-preserving map with an optional thread pool."""

    def test_sequential(self):
        assert numerics.worker_count() == 1
        assert numerics.parallel_map(lambda x: x * x, range(5)) == [0, 1, 4, 9, 16]

    def test_threaded(self, monkeypatch):
        monkeypatch.setenv("BIFURCATO_THREADS", "3")
        clear_config_caches()
        seen = set()

        def square(x):
            seen.add(threading.get_ident())
            return x * x

        assert numerics.worker_count() == 3
        assert numerics.parallel_map(square, range(20)) == [x * x for x in range(20)]
        assert seen

    def test_empty(self):
        assert numerics.parallel_map(lambda x: x, []) == []
