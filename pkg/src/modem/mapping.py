"""
Symbol Mapping and Soft Conversions
All functions broadcast over leading axes. LLRs follow the convention
L = log P(c=1) / P(c=0).
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from ..config.settings import NUMERIC_CONFIG
from ..utils.exceptions import InvalidLength
from ..utils.helpers import bits_to_int
from .constellation import Constellation

logger = logging.getLogger(__name__)


def modulate(bits: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Map consecutive Q-bit groups to PAM levels"""
    bits = np.asarray(bits)
    q = constellation.Q
    if bits.shape[-1] % q:
        raise InvalidLength(f"Bit count {bits.shape[-1]} is not a multiple of Q={q}")
    groups = bits.reshape(bits.shape[:-1] + (bits.shape[-1] // q, q))
    return constellation.levels[constellation.label_index[bits_to_int(groups)]]


def symbol_indices(x: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Index of the nearest level for every real symbol"""
    x = np.asarray(x, dtype=np.float64)
    distance = np.abs(x[..., None] - constellation.levels)
    return np.argmin(distance, axis=-1)


def demodulate_hard(x: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Nearest-level decisions expanded to their bit labels"""
    labels = constellation.bit_map[symbol_indices(x, constellation)]
    return labels.reshape(labels.shape[:-2] + (-1,))


def _clip(llrs: np.ndarray, clip: Optional[float]) -> np.ndarray:
    clip = NUMERIC_CONFIG['llr_clip'] if clip is None else clip
    return np.clip(np.asarray(llrs, dtype=np.float64), -clip, clip)


def log_prior_from_llrs(llrs: np.ndarray, constellation: Constellation,
                        clip: Optional[float] = None) -> np.ndarray:
    """Normalized log prior over levels from per-symbol LLRs (..., Q) -> (..., M)

    Each level scores sum_i c_i L_i; the log(1 + e^L) terms are common to
    all levels and vanish under normalization.
    """
    llrs = _clip(llrs, clip)
    scores = llrs @ constellation.bit_map.T.astype(np.float64)
    return scores - logsumexp(scores, axis=-1, keepdims=True)


def prior_pdf_from_llrs(llrs: np.ndarray, constellation: Constellation,
                        clip: Optional[float] = None) -> np.ndarray:
    """Product-of-Bernoulli prior PDF over levels"""
    return np.exp(log_prior_from_llrs(llrs, constellation, clip))


def prior_moments(pdf: np.ndarray, constellation: Constellation) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and variance of a PDF over the levels"""
    levels = constellation.levels
    mean = pdf @ levels
    variance = pdf @ levels ** 2 - mean ** 2
    return mean, np.maximum(variance, 0.0)


def gaussian_log_pdf_on_levels(mean: np.ndarray, variance: np.ndarray,
                               constellation: Constellation) -> np.ndarray:
    """Normalized log of N(a_m; mean, variance) over the levels"""
    mean = np.asarray(mean, dtype=np.float64)[..., None]
    variance = np.asarray(variance, dtype=np.float64)[..., None]
    scores = -0.5 * (constellation.levels - mean) ** 2 / variance
    return scores - logsumexp(scores, axis=-1, keepdims=True)


def gaussian_pdf_on_levels(mean: np.ndarray, variance: np.ndarray,
                           constellation: Constellation) -> np.ndarray:
    """Gaussian density evaluated on the levels and normalized"""
    mean = np.asarray(mean, dtype=np.float64)[..., None]
    variance = np.asarray(variance, dtype=np.float64)[..., None]
    return softmax(-0.5 * (constellation.levels - mean) ** 2 / variance, axis=-1)


def log_pdf_to_llrs(log_pdf: np.ndarray, constellation: Constellation,
                    clip: Optional[float] = None) -> np.ndarray:
    """Bitwise LLRs (..., M) -> (..., Q) from subset log-masses, clipped

    An empty subset mass saturates at the clip ceiling instead of raising.
    """
    clip = NUMERIC_CONFIG['llr_clip'] if clip is None else clip
    masks = constellation.label_masks
    log_pdf = np.asarray(log_pdf, dtype=np.float64)[..., None, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        ones = logsumexp(np.where(masks, log_pdf, -np.inf), axis=-1)
        zeros = logsumexp(np.where(~masks, log_pdf, -np.inf), axis=-1)
        llrs = ones - zeros
    llrs = np.where(np.isnan(llrs), 0.0, llrs)
    return np.clip(llrs, -clip, clip)


def pdf_to_extrinsic_llrs(pdf: np.ndarray, constellation: Constellation,
                          clip: Optional[float] = None) -> np.ndarray:
    """Bitwise LLRs from a PDF over the levels"""
    with np.errstate(divide='ignore'):
        log_pdf = np.log(np.asarray(pdf, dtype=np.float64))
    return log_pdf_to_llrs(log_pdf, constellation, clip)


def gaussian_to_llrs(mean: np.ndarray, variance: np.ndarray, constellation: Constellation,
                     clip: Optional[float] = None) -> np.ndarray:
    """Bitwise LLRs of a Gaussian evaluated on the levels"""
    return log_pdf_to_llrs(gaussian_log_pdf_on_levels(mean, variance, constellation),
                           constellation, clip)
