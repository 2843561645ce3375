"""
Output Heads
APP head: bitwise LLRs of the combined posterior p_G. EXT head: bitwise
LLRs of the GNN output q_G alone. The subtraction baseline removes the
a-priori LLRs from the APP head.
"""

from typing import Optional

import numpy as np
from scipy.special import logsumexp, softmax

from ..config.settings import NUMERIC_CONFIG
from ..modem.constellation import Constellation
from ..modem.mapping import pdf_to_extrinsic_llrs


def _flatten(llrs: np.ndarray) -> np.ndarray:
    return llrs.reshape(llrs.shape[:-2] + (-1,))


def app_llr_head(posterior: np.ndarray, constellation: Constellation,
                 clip: Optional[float] = None) -> np.ndarray:
    """(..., K, M) posterior PDFs -> (..., K*Q) LLRs"""
    return _flatten(pdf_to_extrinsic_llrs(posterior, constellation, clip))


def ext_llr_head(q_final: np.ndarray, constellation: Constellation,
                 clip: Optional[float] = None) -> np.ndarray:
    """(..., K, M) GNN PDFs -> (..., K*Q) LLRs"""
    return _flatten(pdf_to_extrinsic_llrs(q_final, constellation, clip))


def subtract_prior(app_llrs: np.ndarray, prior_llrs: np.ndarray,
                   clip: Optional[float] = None) -> np.ndarray:
    """APP minus a-priori LLRs, clipped"""
    clip = NUMERIC_CONFIG['llr_clip'] if clip is None else clip
    return np.clip(app_llrs - np.clip(prior_llrs, -clip, clip), -clip, clip)


def bit_llrs_from_logits(logits: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Unclipped LLRs of softmax(logits): (..., K, M) -> (..., K, Q)"""
    masks = constellation.label_masks
    z = logits[..., None, :]
    ones = logsumexp(np.where(masks, z, -np.inf), axis=-1)
    zeros = logsumexp(np.where(~masks, z, -np.inf), axis=-1)
    return ones - zeros


def bit_llrs_backward(dllrs: np.ndarray, logits: np.ndarray,
                      constellation: Constellation) -> np.ndarray:
    """Gradient of bit_llrs_from_logits: (..., K, Q) upstream -> (..., K, M)"""
    masks = constellation.label_masks
    z = logits[..., None, :]
    within_ones = softmax(np.where(masks, z, -np.inf), axis=-1)
    within_zeros = softmax(np.where(~masks, z, -np.inf), axis=-1)
    return np.einsum('...q,...qm->...m', dllrs, within_ones - within_zeros)
