"""
Real PAM Constellations
A square QAM of order M^2 splits into two Gray-coded M-PAM streams.
Levels are scaled so the complex symbol has unit average energy, which
puts E_s = 0.5 on every real dimension.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..utils.helpers import int_to_bits

QAM_NAMES = {
    'qpsk': 4,
    '4qam': 4,
    '16qam': 16,
    '64qam': 64,
    '256qam': 256,
}


@dataclass(frozen=True, eq=False)
class Constellation:
    """Sorted PAM levels with an MSB-first binary-reflected Gray labelling"""
    levels: np.ndarray
    bit_map: np.ndarray
    es: float

    @classmethod
    def from_qam(cls, qam_order: int) -> 'Constellation':
        pam_order = int(round(np.sqrt(qam_order)))
        if pam_order * pam_order != qam_order or pam_order < 2 or pam_order & (pam_order - 1):
            raise ValueError(f"QAM order must be a square power of four, got {qam_order}")

        raw = 2.0 * np.arange(pam_order) - pam_order + 1
        levels = raw / np.sqrt(2.0 * np.mean(raw ** 2))
        q = int(np.log2(pam_order))
        index = np.arange(pam_order)
        bit_map = int_to_bits(index ^ (index >> 1), q)

        levels.setflags(write=False)
        bit_map.setflags(write=False)
        return cls(levels=levels, bit_map=bit_map, es=float(np.mean(levels ** 2)))

    @classmethod
    def from_name(cls, name: str) -> 'Constellation':
        key = name.lower().replace('-', '')
        if key not in QAM_NAMES:
            raise ValueError(f"Unknown modulation: {name}")
        return cls.from_qam(QAM_NAMES[key])

    @property
    def M(self) -> int:
        return self.levels.shape[0]

    @property
    def Q(self) -> int:
        return self.bit_map.shape[1]

    @property
    def max_level(self) -> float:
        return float(self.levels[-1])

    @cached_property
    def label_masks(self) -> np.ndarray:
        """(Q, M) booleans, True where bit i of level m is 1"""
        return self.bit_map.T.astype(bool)

    @cached_property
    def label_index(self) -> np.ndarray:
        """Level index addressed by each integer Gray label"""
        lookup = np.empty(self.M, dtype=np.int64)
        weights = 1 << np.arange(self.Q - 1, -1, -1)
        lookup[self.bit_map.astype(np.int64) @ weights] = np.arange(self.M)
        return lookup

    def __repr__(self):
        return f"Constellation(M={self.M}, Q={self.Q}, es={self.es:.3f})"
