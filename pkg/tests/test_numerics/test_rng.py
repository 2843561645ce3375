"""Tests for seeded substreams"""

import numpy as np
import pytest

from src.numerics.rng import SeededRng


class TestSeededRng:
    def test_same_path_same_draws(self):
        first = SeededRng(42).substream('channel', 3).normal(size=8)
        second = SeededRng(42).substream('channel', 3).normal(size=8)
        assert np.array_equal(first, second)

    def test_trials_and_components_differ(self):
        root = SeededRng(42)
        a = root.substream('channel', 0).normal(size=8)
        b = root.substream('channel', 1).normal(size=8)
        c = root.substream('noise', 0).normal(size=8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_substream_ignores_parent_consumption(self):
        root = SeededRng(5)
        before = root.substream('bits', 2).integers(0, 2, size=32)
        root.normal(size=1000)
        after = root.substream('bits', 2).integers(0, 2, size=32)
        assert np.array_equal(before, after)

    def test_unknown_component(self):
        with pytest.raises(ValueError):
            SeededRng(1).substream('nonsense')
