"""
Seeded Random Streams
Philox counter-based generators keyed by (seed, spawn path) so every
(trial, component) pair owns an independent, reproducible substream.
"""

from typing import Tuple

import numpy as np

STREAM_IDS = {
    'channel': 0,
    'noise': 1,
    'bits': 2,
    'weights': 3,
    'llr': 4,
    'interleaver': 5,
    'dataset': 6,
    'pilots': 7,
    'batches': 8,
    'snr': 9,
    'word': 10,
    'point': 11,
}


class SeededRng:
    """Single-owner random stream

    Substreams never share state with their parent, so concurrent trials
    each derive their own instead of sharing one generator.
    """

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.spawn_key = tuple(int(k) for k in spawn_key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def substream(self, component: str, trial: int = 0) -> 'SeededRng':
        """Independent stream for one purpose of one trial"""
        try:
            component_id = STREAM_IDS[component]
        except KeyError:
            raise ValueError(f"Unknown stream component: {component}") from None
        return SeededRng(self.seed, self.spawn_key + (component_id, int(trial)))

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def choice(self, a, size=None, replace=True):
        return self.generator.choice(a, size=size, replace=replace)

    def permutation(self, n):
        return self.generator.permutation(n)

    def __repr__(self):
        return f"SeededRng(seed={self.seed}, spawn_key={self.spawn_key})"
