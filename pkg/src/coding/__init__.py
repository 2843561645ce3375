"""
Coding Module
Convolutional and turbo codes, interleaving and log-MAP decoding
"""

from .trellis import Trellis, feedforward_trellis, recursive_trellis, encode_trellis
from .convolutional import ConvCodeSpec, RATE_5_6_PATTERN, cc_encode, puncture, depuncture
from .bcjr import log_map, bcjr_decode
from .interleaver import InterleaverSpec, interleave, deinterleave
from .turbo_code import TurboCodeSpec, turbo_encode, turbo_decode

__all__ = [
    'Trellis',
    'feedforward_trellis',
    'recursive_trellis',
    'encode_trellis',
    'ConvCodeSpec',
    'RATE_5_6_PATTERN',
    'cc_encode',
    'puncture',
    'depuncture',
    'log_map',
    'bcjr_decode',
    'InterleaverSpec',
    'interleave',
    'deinterleave',
    'TurboCodeSpec',
    'turbo_encode',
    'turbo_decode'
]
