"""
Terminated Convolutional Codes
Mother code output is interleaved per trellis step (g0, g1, g0, g1, ...).
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..utils.exceptions import InvalidLength
from .trellis import Trellis, encode_trellis, feedforward_trellis

logger = logging.getLogger(__name__)

# period-5 pattern on the [133, 171] mother code, rows are g0 and g1
RATE_5_6_PATTERN = ((1, 0, 1, 0, 1), (1, 1, 0, 1, 0))

PUNCTURE_PATTERNS = {
    '1/2': None,
    '5/6': RATE_5_6_PATTERN,
}


@dataclass(frozen=True)
class ConvCodeSpec:
    generators: Tuple[int, ...] = (133, 171)
    constraint_length: int = 7
    puncture_pattern: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self):
        if not self.generators or any(int(str(g), 8) == 0 for g in self.generators):
            raise ValueError("Generators must be nonzero octal values")
        if self.puncture_pattern is not None:
            pattern = np.asarray(self.puncture_pattern)
            if pattern.shape[0] != len(self.generators) or not pattern.any(axis=0).all():
                raise ValueError("Puncture pattern must keep at least one bit per step")

    @classmethod
    def for_rate(cls, rate: str) -> 'ConvCodeSpec':
        if rate not in PUNCTURE_PATTERNS:
            raise ValueError(f"Unsupported convolutional code rate: {rate}")
        return cls(puncture_pattern=PUNCTURE_PATTERNS[rate])

    @property
    def trellis(self) -> Trellis:
        return feedforward_trellis(tuple(self.generators), self.constraint_length)

    @property
    def tail_bits(self) -> int:
        return self.constraint_length - 1

    def mother_length(self, n_message: int) -> int:
        return len(self.generators) * (n_message + self.tail_bits)

    def keep_mask(self, n_message: int) -> np.ndarray:
        """Boolean mask over the mother output selecting transmitted bits"""
        steps = n_message + self.tail_bits
        if self.puncture_pattern is None:
            return np.ones(self.mother_length(n_message), dtype=bool)
        pattern = np.asarray(self.puncture_pattern, dtype=bool)
        columns = np.arange(steps) % pattern.shape[1]
        return pattern[:, columns].T.reshape(-1)

    def coded_length(self, n_message: int) -> int:
        return int(self.keep_mask(n_message).sum())

    def rate(self, n_message: int) -> float:
        return n_message / self.coded_length(n_message)


def cc_encode(message: np.ndarray, spec: ConvCodeSpec) -> np.ndarray:
    """Encode, terminate with zero tail bits and puncture if configured"""
    message = np.asarray(message, dtype=np.int8)
    _, coded, final_state = encode_trellis(spec.trellis, message)
    assert final_state == 0
    mother = coded.reshape(-1)
    return mother[spec.keep_mask(message.size)]


def puncture(values: np.ndarray, spec: ConvCodeSpec, n_message: int) -> np.ndarray:
    return np.asarray(values)[spec.keep_mask(n_message)]


def depuncture(llrs: np.ndarray, spec: ConvCodeSpec, n_message: int) -> np.ndarray:
    """Re-insert punctured positions as zero LLRs"""
    mask = spec.keep_mask(n_message)
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.size != mask.sum():
        raise InvalidLength(f"Expected {mask.sum()} coded LLRs, got {llrs.size}")
    mother = np.zeros(mask.size)
    mother[mask] = llrs
    return mother
