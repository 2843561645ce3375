"""
Log-MAP BCJR Decoding
Forward/backward recursions in the log domain with the exact max-star
(log-add-exp) operator.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..utils.exceptions import InvalidLength
from .convolutional import ConvCodeSpec, depuncture
from .trellis import Trellis

logger = logging.getLogger(__name__)


def log_map(trellis: Trellis, channel_llrs: np.ndarray, apriori_llrs: Optional[np.ndarray],
            n_message: int, terminated: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Soft-in/soft-out decoding over one trellis

    channel_llrs: (steps, n_outputs), tail steps included when terminated.
    apriori_llrs: (n_message,) or None.
    Returns message APP LLRs (n_message,) and coded-bit extrinsic LLRs
    (steps, n_outputs).
    """
    channel_llrs = np.asarray(channel_llrs, dtype=np.float64)
    steps = channel_llrs.shape[0]
    expected_steps = n_message + (trellis.tail_length if terminated else 0)
    if steps != expected_steps or channel_llrs.shape[1] != trellis.n_outputs:
        raise InvalidLength(f"Expected {expected_steps} x {trellis.n_outputs} channel LLRs, "
                            f"got {channel_llrs.shape}")

    outputs = trellis.outputs.astype(np.float64)
    gamma = np.einsum('sun,tn->tsu', outputs, channel_llrs)
    if apriori_llrs is not None:
        apriori_llrs = np.asarray(apriori_llrs, dtype=np.float64)
        if apriori_llrs.shape != (n_message,):
            raise InvalidLength(f"Expected {n_message} a-priori LLRs, got {apriori_llrs.shape}")
        gamma[:n_message, :, 1] += apriori_llrs[:, None]
    if steps > n_message:
        forbidden = np.arange(2)[None, :] != trellis.tail_input[:, None]
        gamma[n_message:, forbidden] = -np.inf

    n_states = trellis.n_states
    alpha = np.full((steps + 1, n_states), -np.inf)
    beta = np.full((steps + 1, n_states), -np.inf)
    alpha[0, 0] = 0.0
    if terminated:
        beta[steps, 0] = 0.0
    else:
        beta[steps, :] = 0.0

    prev_state, prev_input, next_state = trellis.prev_state, trellis.prev_input, trellis.next_state
    with np.errstate(invalid='ignore'):
        for t in range(steps):
            candidates = alpha[t][prev_state] + gamma[t][prev_state, prev_input]
            merged = np.logaddexp(candidates[:, 0], candidates[:, 1])
            alpha[t + 1] = merged - np.max(merged)
        for t in range(steps - 1, -1, -1):
            candidates = gamma[t] + beta[t + 1][next_state]
            merged = np.logaddexp(candidates[:, 0], candidates[:, 1])
            beta[t] = merged - np.max(merged)

    total = alpha[:-1, :, None] + gamma + beta[1:][:, next_state]

    with np.errstate(divide='ignore', invalid='ignore'):
        message_app = (logsumexp(total[:n_message, :, 1], axis=1)
                       - logsumexp(total[:n_message, :, 0], axis=1))

        flat = total.reshape(steps, -1)
        coded_app = np.empty_like(channel_llrs)
        for j in range(trellis.n_outputs):
            ones = outputs[:, :, j].reshape(-1) > 0.5
            coded_app[:, j] = (logsumexp(flat[:, ones], axis=1)
                               - logsumexp(flat[:, ~ones], axis=1))
        extrinsic = coded_app - channel_llrs

    return message_app, np.nan_to_num(extrinsic, nan=0.0)


def bcjr_decode(channel_llrs: np.ndarray, apriori_llrs: Optional[np.ndarray],
                spec: ConvCodeSpec, n_message: int) -> Tuple[np.ndarray, np.ndarray]:
    """Decode a terminated (and possibly punctured) convolutional codeword

    Returns message APP LLRs and extrinsic LLRs on the transmitted coded
    bits, in transmission order.
    """
    mother = depuncture(channel_llrs, spec, n_message)
    trellis = spec.trellis
    steps = n_message + spec.tail_bits
    message_app, extrinsic = log_map(trellis, mother.reshape(steps, trellis.n_outputs),
                                     apriori_llrs, n_message)
    return message_app, extrinsic.reshape(-1)[spec.keep_mask(n_message)]
