"""
Channel Codecs for the Receiver Loop
A common encode/decode surface over the convolutional code, the turbo
code and the uncoded pass-through.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..coding.bcjr import bcjr_decode
from ..coding.convolutional import ConvCodeSpec, cc_encode
from ..coding.turbo_code import TurboCodeSpec, turbo_decode, turbo_encode
from ..utils.exceptions import InvalidLength

logger = logging.getLogger(__name__)


class CodeKind(str, Enum):
    CC = 'cc'
    TURBO = 'turbo'
    UNCODED = 'uncoded'


@dataclass(frozen=True)
class CodeConfig:
    kind: CodeKind = CodeKind.CC
    message_length: int = 128
    rate: str = '1/2'
    interleaver_seed: Optional[int] = 0
    turbo_inner_iterations: int = 10

    def __post_init__(self):
        object.__setattr__(self, 'kind', CodeKind(self.kind))
        if self.message_length < 1:
            raise InvalidLength(f"Message length must be positive, got {self.message_length}")


class ChannelCodec:
    """encode(b) -> c and decode(L_channel) -> (message APP, coded extrinsic)"""

    def __init__(self, config: CodeConfig):
        self.config = config
        self.n_message = config.message_length
        if config.kind == CodeKind.CC:
            self.spec = ConvCodeSpec.for_rate(config.rate)
            self.n_coded = self.spec.coded_length(self.n_message)
        elif config.kind == CodeKind.TURBO:
            self.spec = TurboCodeSpec(self.n_message, interleaver_seed=config.interleaver_seed,
                                      inner_iterations=config.turbo_inner_iterations)
            self.n_coded = self.spec.coded_length
        else:
            self.spec = None
            self.n_coded = self.n_message

    @property
    def kind(self) -> CodeKind:
        return self.config.kind

    @property
    def rate(self) -> float:
        return self.n_message / self.n_coded

    def encode(self, message: np.ndarray) -> np.ndarray:
        message = np.asarray(message, dtype=np.int8)
        if self.kind == CodeKind.CC:
            return cc_encode(message, self.spec)
        if self.kind == CodeKind.TURBO:
            return turbo_encode(message, self.spec)
        return message.copy()

    def decode(self, channel_llrs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        channel_llrs = np.asarray(channel_llrs, dtype=np.float64)
        if channel_llrs.size != self.n_coded:
            raise InvalidLength(f"Expected {self.n_coded} coded LLRs, got {channel_llrs.size}")
        if self.kind == CodeKind.CC:
            return bcjr_decode(channel_llrs, None, self.spec, self.n_message)
        if self.kind == CodeKind.TURBO:
            return turbo_decode(channel_llrs, self.spec)
        return channel_llrs.copy(), np.zeros_like(channel_llrs)
