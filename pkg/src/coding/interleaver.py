"""
Seeded Random Interleaver
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ..numerics.rng import SeededRng
from ..utils.exceptions import InvalidLength


@dataclass(frozen=True)
class InterleaverSpec:
    """Fisher-Yates permutation of `length` positions

    seed=None is the identity permutation.
    """
    length: int
    seed: Optional[int] = 0

    @cached_property
    def permutation(self) -> np.ndarray:
        if self.seed is None:
            perm = np.arange(self.length)
        else:
            perm = SeededRng(self.seed).substream('interleaver').permutation(self.length)
        perm.setflags(write=False)
        return perm

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.empty(self.length, dtype=np.int64)
        inv[self.permutation] = np.arange(self.length)
        inv.setflags(write=False)
        return inv


def _check(sequence: np.ndarray, spec: InterleaverSpec) -> np.ndarray:
    sequence = np.asarray(sequence)
    if sequence.shape[-1] != spec.length:
        raise InvalidLength(f"Interleaver expects length {spec.length}, got {sequence.shape[-1]}")
    return sequence


def interleave(sequence: np.ndarray, spec: InterleaverSpec) -> np.ndarray:
    """out[i] = in[perm[i]]"""
    return _check(sequence, spec)[..., spec.permutation]


def deinterleave(sequence: np.ndarray, spec: InterleaverSpec) -> np.ndarray:
    return _check(sequence, spec)[..., spec.inverse]
