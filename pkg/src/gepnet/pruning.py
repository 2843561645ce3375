"""
Covariance-Driven Edge Pruning
Edge i -> j is dropped when rho_ij^2 < alpha * mean_{k != j} rho_kj^2,
with rho the correlation coefficients of the layer's LMMSE covariance.
"""

import logging
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..channel.generation import apply_awgn, generate_channel
from ..channel.models import ChannelModelSpec
from ..detection.ep import EpConfig, ep_detect
from ..gnn.network import full_mask
from ..modem.constellation import Constellation
from ..modem.mapping import modulate
from ..numerics.rng import SeededRng

logger = logging.getLogger(__name__)


def correlation_coefficients(sigma: np.ndarray) -> np.ndarray:
    scale = np.sqrt(np.diagonal(sigma, axis1=-2, axis2=-1))
    return sigma / (scale[..., :, None] * scale[..., None, :])


def prune_edges(sigma: np.ndarray, alpha: float) -> np.ndarray:
    """Directed edge mask [source, destination]; the diagonal is always False"""
    if alpha < 0:
        raise ValueError(f"Pruning factor must be non-negative, got {alpha}")
    k = sigma.shape[-1]
    mask = full_mask(sigma.shape[:-1])
    if alpha == 0.0 or k < 2:
        return mask

    rho2 = correlation_coefficients(sigma) ** 2
    rho2 = np.where(mask, rho2, 0.0)
    column_mean = rho2.sum(axis=-2) / (k - 1)
    pruned = rho2 < alpha * column_mean[..., None, :]
    return mask & ~pruned


def retention_fraction(mask: np.ndarray) -> np.ndarray:
    """Retained share of the K(K-1) directed edges"""
    k = mask.shape[-1]
    if k < 2:
        return np.ones(mask.shape[:-2])
    return mask.sum(axis=(-2, -1)) / (k * (k - 1))


def measure_retention(spec: ChannelModelSpec, constellation: Constellation, snr_db: float,
                      alphas: Iterable[float], n_trials: int, rng: SeededRng,
                      ep_config: Optional[EpConfig] = None) -> pd.DataFrame:
    """Mean retained-edge fraction per alpha and EP layer over random instances

    The per-layer covariances come from plain EP trajectories.
    """
    ep_config = ep_config or EpConfig()
    H = generate_channel(spec, rng.substream('channel'), size=n_trials)
    bits = rng.substream('bits').integers(0, 2, size=(n_trials, spec.K * constellation.Q))
    instance = apply_awgn(H, modulate(bits, constellation), snr_db, rng.substream('noise'),
                          constellation.es)
    result = ep_detect(instance, None, ep_config, constellation, record=True)

    rows: List[Dict] = []
    for alpha in alphas:
        for layer, state in enumerate(result.trace, start=1):
            fraction = retention_fraction(prune_edges(state.sigma, alpha))
            rows.append({'alpha': float(alpha), 'layer': layer,
                         'retention': float(fraction.mean())})
    frame = pd.DataFrame(rows)
    logger.info(f"Measured edge retention over {n_trials} instances at {snr_db} dB")
    return frame
