"""
Channel Generation
Complex Rayleigh and Kronecker-correlated draws, the real-valued
decomposition and SNR-calibrated additive noise.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..config.settings import NUMERIC_CONFIG
from ..numerics.rng import SeededRng
from ..utils.exceptions import DimensionMismatch, InvalidCorrelation
from ..utils.helpers import db_to_linear
from .models import ChannelKind, ChannelModelSpec, RealChannelInstance

logger = logging.getLogger(__name__)


def exponential_correlation(n: int, rho: float) -> np.ndarray:
    """Correlation matrix with entries rho^|i-j|"""
    if not 0.0 <= rho < 1.0:
        raise InvalidCorrelation(f"Correlation coefficient must lie in [0, 1), got {rho}")
    index = np.arange(n)
    return rho ** np.abs(index[:, None] - index[None, :])


def _spd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(matrix)
    return (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T


def sample_complex_channel(spec: ChannelModelSpec, rng: SeededRng,
                           size: Optional[int] = None) -> np.ndarray:
    """Unnormalized complex channel

    Real and imaginary parts of U are N(0, 1/N) with N = 2 n_r, so every
    entry of the real-valued H has variance 1/N. The Kronecker model mixes
    U as R_r^1/2 U R_t^1/2; rho = 0 leaves U untouched.
    """
    shape = (spec.n_r, spec.n_t) if size is None else (size, spec.n_r, spec.n_t)
    scale = math.sqrt(1.0 / spec.N)
    u = rng.normal(0.0, scale, shape) + 1j * rng.normal(0.0, scale, shape)

    if spec.kind == ChannelKind.KRONECKER and spec.corr_coeff > 0.0:
        r_rx = _spd_sqrt(exponential_correlation(spec.n_r, spec.corr_coeff))
        r_tx = _spd_sqrt(exponential_correlation(spec.n_t, spec.corr_coeff))
        u = r_rx @ u @ r_tx
    return u


def normalize_columns(H: np.ndarray) -> np.ndarray:
    """Scale every column to unit Euclidean norm"""
    norms = np.linalg.norm(H, axis=-2, keepdims=True)
    return H / norms


def generate_complex_channel(spec: ChannelModelSpec, rng: SeededRng,
                             size: Optional[int] = None) -> np.ndarray:
    """Complex channel with unit-norm columns"""
    return normalize_columns(sample_complex_channel(spec, rng, size))


def complex_to_real(Hc: np.ndarray, yc: Optional[np.ndarray] = None
                    ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Real decomposition [[Re, -Im], [Im, Re]] and stacked [Re(y); Im(y)]"""
    Hc = np.asarray(Hc)
    re, im = Hc.real, Hc.imag
    top = np.concatenate([re, -im], axis=-1)
    bottom = np.concatenate([im, re], axis=-1)
    H = np.concatenate([top, bottom], axis=-2).astype(np.float64)

    y = None
    if yc is not None:
        yc = np.asarray(yc)
        if yc.shape[-1] != Hc.shape[-2]:
            raise DimensionMismatch(f"yc length {yc.shape[-1]} does not match {Hc.shape[-2]} rows")
        y = np.concatenate([yc.real, yc.imag], axis=-1).astype(np.float64)
    return H, y


def generate_channel(spec: ChannelModelSpec, rng: SeededRng,
                     size: Optional[int] = None) -> np.ndarray:
    """Real-valued N x K channel with unit-norm columns"""
    H, _ = complex_to_real(generate_complex_channel(spec, rng, size))
    return H


def noise_variance(snr_db: float, n_rows: int, n_cols: int, es: float) -> float:
    """Per-real-dimension noise variance for SNR = E||Hx||^2 / E||w||^2

    With unit-norm columns E||Hx||^2 = K * E_s.
    """
    snr = db_to_linear(snr_db)
    if math.isinf(snr):
        return NUMERIC_CONFIG['noiseless_sigma_w2']
    return n_cols * es / (n_rows * snr)


def apply_awgn(H: np.ndarray, x: np.ndarray, snr_db: float, rng: SeededRng,
               es: float) -> RealChannelInstance:
    """Observe x through H with noise calibrated to snr_db

    snr_db = +inf switches the noise off; the instance then carries a tiny
    positive variance so the detectors stay well defined.
    """
    H = np.asarray(H, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != H.shape[-1]:
        raise DimensionMismatch(f"x length {x.shape[-1]} does not match K={H.shape[-1]}")

    clean = np.einsum('...nk,...k->...n', H, x)
    sigma_w2 = noise_variance(snr_db, H.shape[-2], H.shape[-1], es)
    if math.isinf(db_to_linear(snr_db)):
        y = clean
    else:
        y = clean + rng.normal(0.0, math.sqrt(sigma_w2), clean.shape)
    return RealChannelInstance(H, y, np.full(H.shape[:-2], sigma_w2))
