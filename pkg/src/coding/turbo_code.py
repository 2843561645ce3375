"""
Parallel-Concatenated Turbo Code
Two terminated RSC constituents share the systematic stream; parities
alternate (first encoder on even steps, second on odd steps) for rate 1/2.
Codeword layout: [u_0, p_0, u_1, p_1, ..., tail_1 (sys, par) x m, tail_2 (sys, par) x m].
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..utils.exceptions import InvalidLength
from .bcjr import log_map
from .interleaver import InterleaverSpec, deinterleave, interleave
from .trellis import Trellis, encode_trellis, recursive_trellis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TurboCodeSpec:
    message_length: int
    feedback: int = 13
    feedforward: int = 15
    constraint_length: int = 4
    interleaver_seed: int = 0
    inner_iterations: int = 10

    def __post_init__(self):
        if self.inner_iterations < 1:
            raise ValueError("inner_iterations must be at least 1")
        if self.message_length < 1:
            raise ValueError("message_length must be positive")

    @property
    def trellis(self) -> Trellis:
        return recursive_trellis(self.feedback, self.feedforward, self.constraint_length)

    @property
    def interleaver(self) -> InterleaverSpec:
        return InterleaverSpec(self.message_length, self.interleaver_seed)

    @property
    def tail_steps(self) -> int:
        return self.constraint_length - 1

    @property
    def coded_length(self) -> int:
        return 2 * self.message_length + 4 * self.tail_steps

    @property
    def rate(self) -> float:
        return self.message_length / self.coded_length


def _even_steps(n: int) -> np.ndarray:
    return np.arange(n) % 2 == 0


def turbo_encode(message: np.ndarray, spec: TurboCodeSpec) -> np.ndarray:
    message = np.asarray(message, dtype=np.int8)
    if message.size != spec.message_length:
        raise InvalidLength(f"Expected {spec.message_length} message bits, got {message.size}")

    n = spec.message_length
    _, coded1, _ = encode_trellis(spec.trellis, message)
    _, coded2, _ = encode_trellis(spec.trellis, interleave(message, spec.interleaver))

    parity = np.where(_even_steps(n), coded1[:n, 1], coded2[:n, 1])
    body = np.column_stack([message, parity]).reshape(-1)
    return np.concatenate([body, coded1[n:].reshape(-1), coded2[n:].reshape(-1)]).astype(np.int8)


def turbo_decode(channel_llrs: np.ndarray, spec: TurboCodeSpec,
                 iterations: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Iterative decoding of the PCCC

    Returns message APP LLRs and extrinsic LLRs on every codeword bit in
    codeword order.
    """
    channel_llrs = np.asarray(channel_llrs, dtype=np.float64)
    if channel_llrs.size != spec.coded_length:
        raise InvalidLength(f"Expected {spec.coded_length} coded LLRs, got {channel_llrs.size}")
    iterations = spec.inner_iterations if iterations is None else iterations

    n, m = spec.message_length, spec.tail_steps
    trellis, pi = spec.trellis, spec.interleaver
    body = channel_llrs[:2 * n].reshape(n, 2)
    systematic = body[:, 0]
    even = _even_steps(n)
    parity1 = np.where(even, body[:, 1], 0.0)
    parity2 = np.where(even, 0.0, body[:, 1])
    tail1 = channel_llrs[2 * n:2 * n + 2 * m].reshape(m, 2)
    tail2 = channel_llrs[2 * n + 2 * m:].reshape(m, 2)

    channel1 = np.vstack([np.column_stack([systematic, parity1]), tail1])
    systematic_pi = interleave(systematic, pi)
    channel2 = np.vstack([np.column_stack([systematic_pi, parity2]), tail2])

    extrinsic_21 = np.zeros(n)
    for _ in range(iterations):
        app1, coded_ext1 = log_map(trellis, channel1, extrinsic_21, n)
        extrinsic_12 = interleave(app1 - extrinsic_21 - systematic, pi)
        app2, coded_ext2 = log_map(trellis, channel2, extrinsic_12, n)
        extrinsic_21 = deinterleave(app2 - extrinsic_12 - systematic_pi, pi)

    message_app = deinterleave(app2, pi)
    parity_ext = np.where(even, coded_ext1[:n, 1], coded_ext2[:n, 1])
    coded_ext = np.concatenate([
        np.column_stack([message_app - systematic, parity_ext]).reshape(-1),
        coded_ext1[n:].reshape(-1),
        coded_ext2[n:].reshape(-1),
    ])
    return message_app, coded_ext
