"""
Pilot-Based LMMSE Channel Estimation
The complex channel Hc (n_r x n_t) is sounded by a pilot matrix P
(N_p x n_t): Y = Hc P^T + W. Channel entries are vectorized row-major,
so vec(Y) = (I kron P) vec(Hc).
"""

import logging
import math
from typing import Optional

import numpy as np

from ..numerics.rng import SeededRng
from ..utils.exceptions import DimensionMismatch, InvalidPilots
from .generation import exponential_correlation
from .models import ChannelKind, ChannelModelSpec

logger = logging.getLogger(__name__)

GRAM_CONDITION_LIMIT = 1e12


def dft_pilot_matrix(n_pilots: int, n_t: int) -> np.ndarray:
    """First n_t columns of the unnormalized n_pilots-point DFT matrix"""
    if n_pilots < n_t:
        raise InvalidPilots(f"Need at least {n_t} pilots, got {n_pilots}")
    p = np.arange(n_pilots)[:, None]
    q = np.arange(n_t)[None, :]
    return np.exp(-2j * np.pi * p * q / n_pilots)


def transmit_pilots(Hc: np.ndarray, pilots: np.ndarray, sigma_w2: float,
                    rng: SeededRng) -> np.ndarray:
    """Received pilot block Y = Hc P^T + W; W has variance sigma_w2 per real dimension"""
    clean = Hc @ pilots.T
    scale = math.sqrt(sigma_w2)
    noise = rng.normal(0.0, scale, clean.shape) + 1j * rng.normal(0.0, scale, clean.shape)
    return clean + noise


def channel_covariance(spec: ChannelModelSpec, prior: str = 'kronecker') -> np.ndarray:
    """Covariance of row-major vec(Hc)

    'kronecker' uses R_r kron R_t of the configured model, 'identity'
    ignores correlation. Both are scaled by the per-entry variance 1/n_r.
    """
    scale = 1.0 / spec.n_r
    if prior == 'identity' or spec.kind == ChannelKind.IID_RAYLEIGH or spec.corr_coeff == 0.0:
        return scale * np.eye(spec.n_r * spec.n_t)
    if prior != 'kronecker':
        raise ValueError(f"Unknown covariance prior: {prior}")
    r_rx = exponential_correlation(spec.n_r, spec.corr_coeff)
    r_tx = exponential_correlation(spec.n_t, spec.corr_coeff)
    return scale * np.kron(r_rx, r_tx)


def _pilot_gram_inverse(pilots: np.ndarray) -> np.ndarray:
    n_pilots, n_t = pilots.shape
    if n_pilots < n_t:
        raise InvalidPilots(f"Need at least {n_t} pilots, got {n_pilots}")
    gram = pilots.conj().T @ pilots
    if not np.isfinite(np.linalg.cond(gram)) or np.linalg.cond(gram) > GRAM_CONDITION_LIMIT:
        raise InvalidPilots("Pilot Gram matrix is singular")
    return np.linalg.inv(gram)


def lmmse_channel_estimate(pilot_observations: np.ndarray, pilots: np.ndarray,
                           sigma_w2: float, covariance: Optional[np.ndarray] = None
                           ) -> np.ndarray:
    """Linear MMSE estimate of Hc from its pilot observations

    Uses the least-squares estimate followed by the Wiener smoother
    C (C + s^2 (A^H A)^-1)^-1, which equals the direct LMMSE form for a
    full-rank pilot matrix and stays exact at zero noise.
    The least-squares error of one row of Hc has covariance
    2 s^2 (A^H A)^-1 in the E[h h^H] convention of `channel_covariance`.
    """
    n_r = pilot_observations.shape[0]
    n_t = pilots.shape[1]
    if pilot_observations.shape[1] != pilots.shape[0]:
        raise DimensionMismatch("Pilot observations and pilot matrix disagree on N_p")

    gram_inv = _pilot_gram_inverse(pilots)
    h_ls = pilot_observations @ pilots.conj() @ gram_inv.T
    if covariance is None:
        covariance = np.eye(n_r * n_t) / n_r

    noise_term = 2.0 * sigma_w2 * np.kron(np.eye(n_r), gram_inv)
    smoothed = covariance @ np.linalg.solve(covariance + noise_term, h_ls.reshape(-1))
    return smoothed.reshape(n_r, n_t)


def lmmse_estimation_mse(pilots: np.ndarray, sigma_w2: float, covariance: np.ndarray) -> float:
    """Expected ||Hc_hat - Hc||_F^2 of the LMMSE estimator"""
    n_entries = covariance.shape[0]
    n_t = pilots.shape[1]
    gram_inv = _pilot_gram_inverse(pilots)
    noise_term = 2.0 * sigma_w2 * np.kron(np.eye(n_entries // n_t), gram_inv)
    error = covariance - covariance @ np.linalg.solve(covariance + noise_term, covariance)
    return float(np.real(np.trace(error)))
