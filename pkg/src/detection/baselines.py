"""
Reference Detectors
Exhaustive MAP over the whole constellation lattice and a single-shot
LMMSE detector with Gaussian demapping.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from ..channel.models import RealChannelInstance
from ..config.settings import NUMERIC_CONFIG
from ..modem.constellation import Constellation
from ..modem.mapping import gaussian_to_llrs, log_pdf_to_llrs
from ..utils.exceptions import SizeTooLarge
from .ep import EpState, cavity, lmmse_step

logger = logging.getLogger(__name__)

ENUMERATION_CHUNK = 1 << 16


@dataclass
class MapResult:
    marginals: np.ndarray
    app_llrs: np.ndarray
    extrinsic_llrs: np.ndarray


@dataclass
class LmmseResult:
    estimate: np.ndarray
    x_e: np.ndarray
    v_e: np.ndarray
    llrs: np.ndarray


def map_oracle(instance: RealChannelInstance, prior_pdfs: Optional[np.ndarray],
               constellation: Constellation, clip: Optional[float] = None,
               cap: Optional[int] = None) -> MapResult:
    """Exact marginal posteriors of one unbatched instance by enumeration

    Extrinsic LLRs are the bitwise APP LLRs minus the a-priori LLRs, which
    is exact because the prior factorizes over bits.
    """
    cap = NUMERIC_CONFIG['map_oracle_cap'] if cap is None else cap
    clip = NUMERIC_CONFIG['llr_clip'] if clip is None else clip
    if instance.batch_shape:
        raise ValueError("map_oracle works on a single instance")

    k, m = instance.K, constellation.M
    if m ** k > cap:
        raise SizeTooLarge(f"Enumeration of {m}^{k} vectors exceeds the cap of {cap}")

    if prior_pdfs is None:
        log_prior = np.full((k, m), -np.log(m))
    else:
        with np.errstate(divide='ignore'):
            log_prior = np.log(prior_pdfs)

    indices = np.array(list(itertools.product(range(m), repeat=k)), dtype=np.int64)
    log_weights = np.empty(indices.shape[0])
    for start in range(0, indices.shape[0], ENUMERATION_CHUNK):
        block = indices[start:start + ENUMERATION_CHUNK]
        residual = instance.y - constellation.levels[block] @ instance.H.T
        log_weights[start:start + ENUMERATION_CHUNK] = (
            -0.5 * np.sum(residual ** 2, axis=1) / instance.sigma_w2
            + log_prior[np.arange(k), block].sum(axis=1)
        )

    log_marginals = np.empty((k, m))
    with np.errstate(divide='ignore'):
        for node in range(k):
            for level in range(m):
                log_marginals[node, level] = logsumexp(log_weights[indices[:, node] == level])
    log_marginals -= logsumexp(log_marginals, axis=1, keepdims=True)

    app = log_pdf_to_llrs(log_marginals, constellation, np.inf)
    apriori = log_pdf_to_llrs(log_prior, constellation, np.inf)
    with np.errstate(invalid='ignore'):
        extrinsic = np.nan_to_num(app - apriori, nan=0.0)
    return MapResult(
        marginals=np.exp(log_marginals),
        app_llrs=np.clip(app, -clip, clip).reshape(-1),
        extrinsic_llrs=np.clip(extrinsic, -clip, clip).reshape(-1),
    )


def lmmse_detect(instance: RealChannelInstance, constellation: Constellation,
                 prior_means: Optional[np.ndarray] = None, prior_vars: Optional[np.ndarray] = None,
                 var_floor: Optional[float] = None, clip: Optional[float] = None) -> LmmseResult:
    """One LMMSE solve with Gaussian priors (zero mean, E_s by default)"""
    var_floor = NUMERIC_CONFIG['var_floor'] if var_floor is None else var_floor
    shape = instance.batch_shape + (instance.K,)
    means = np.zeros(shape) if prior_means is None else np.asarray(prior_means, dtype=np.float64)
    variances = (np.full(shape, constellation.es) if prior_vars is None
                 else np.maximum(np.asarray(prior_vars, dtype=np.float64), var_floor))

    state = EpState(gamma=means / variances, lam=1.0 / variances)
    state.mu, state.sigma = lmmse_step(state, instance)
    x_e, v_e = cavity(state, var_floor)
    llrs = gaussian_to_llrs(x_e, v_e, constellation, clip)
    return LmmseResult(estimate=state.mu, x_e=x_e, v_e=v_e,
                       llrs=llrs.reshape(llrs.shape[:-2] + (-1,)))
