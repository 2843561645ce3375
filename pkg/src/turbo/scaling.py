"""
Adaptive Decoder-LLR Scaling
Decoder extrinsic LLRs are shrunk into the range the learned detector saw
during training before they re-enter it as priors.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_COVERAGE = 0.97


@dataclass(frozen=True)
class LlrScaler:
    """r bounds a fraction `coverage` of the training prior LLR magnitudes"""
    r: float
    coverage: float = DEFAULT_COVERAGE

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"LLR range must be positive, got {self.r}")

    @classmethod
    def from_training_llrs(cls, llrs: np.ndarray, coverage: float = DEFAULT_COVERAGE) -> 'LlrScaler':
        magnitudes = np.abs(np.asarray(llrs, dtype=np.float64)).reshape(-1)
        r = float(np.quantile(magnitudes, coverage))
        logger.debug(f"LLR range r={r:.4f} at coverage {coverage}")
        return cls(r=r, coverage=coverage)

    @classmethod
    def from_metadata(cls, metadata: dict, coverage: float = DEFAULT_COVERAGE) -> Optional['LlrScaler']:
        r = metadata.get('llr_range')
        return None if not r else cls(r=float(r), coverage=coverage)


def scale_decoder_llrs(llrs: np.ndarray, scaler: Optional[LlrScaler]) -> np.ndarray:
    """Multiply by r / r_i when r_i = max|L| exceeds r"""
    llrs = np.asarray(llrs, dtype=np.float64)
    if scaler is None or llrs.size == 0:
        return llrs
    peak = float(np.max(np.abs(llrs)))
    if peak <= scaler.r:
        return llrs
    return llrs * (scaler.r / peak)
