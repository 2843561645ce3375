"""
Channel Data Models
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from ..utils.exceptions import DimensionMismatch, InvalidCorrelation


class ChannelKind(str, Enum):
    IID_RAYLEIGH = 'iid_rayleigh'
    KRONECKER = 'kronecker'


@dataclass(frozen=True)
class ChannelModelSpec:
    """Antenna counts and spatial correlation of the complex channel"""
    n_r: int
    n_t: int
    kind: ChannelKind = ChannelKind.IID_RAYLEIGH
    corr_coeff: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', ChannelKind(self.kind))
        if self.n_t < 1 or self.n_r < self.n_t:
            raise DimensionMismatch(f"Need n_r >= n_t >= 1, got n_r={self.n_r}, n_t={self.n_t}")
        if not 0.0 <= self.corr_coeff < 1.0:
            raise InvalidCorrelation(f"Correlation coefficient must lie in [0, 1), got {self.corr_coeff}")

    @property
    def N(self) -> int:
        return 2 * self.n_r

    @property
    def K(self) -> int:
        return 2 * self.n_t


@dataclass
class RealChannelInstance:
    """Real-valued observation y = Hx + w

    Arrays may carry leading batch axes: H (..., N, K), y (..., N) and
    sigma_w2 (...).
    """
    H: np.ndarray
    y: np.ndarray
    sigma_w2: np.ndarray = field(default=1.0)

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        batch = self.H.shape[:-2]
        if self.y.shape != batch + (self.H.shape[-2],):
            raise DimensionMismatch(f"y shape {self.y.shape} does not match H shape {self.H.shape}")
        sigma = np.asarray(self.sigma_w2, dtype=np.float64)
        if np.any(sigma <= 0):
            raise ValueError("sigma_w2 must be positive")
        self.sigma_w2 = np.broadcast_to(sigma, batch).copy() if batch else sigma.reshape(())

    @property
    def N(self) -> int:
        return self.H.shape[-2]

    @property
    def K(self) -> int:
        return self.H.shape[-1]

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.H.shape[:-2]

    def with_channel(self, H_detector: np.ndarray) -> 'RealChannelInstance':
        """Same observation seen through another channel matrix (imperfect CSI)"""
        return RealChannelInstance(H_detector, self.y, self.sigma_w2)

    def __getitem__(self, index) -> 'RealChannelInstance':
        return RealChannelInstance(self.H[index], self.y[index], self.sigma_w2[index])

    def __len__(self) -> int:
        if not self.batch_shape:
            raise TypeError("Unbatched channel instance has no length")
        return self.batch_shape[0]
