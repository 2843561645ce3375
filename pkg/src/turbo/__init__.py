"""
Turbo Receiver Package
"""

from .codecs import ChannelCodec, CodeConfig, CodeKind
from .metrics import ErrorCounter, accumulate_metrics, wilson_stderr
from .receiver import (CsiConfig, DetectorKind, SoftDetector, Transmission, TurboConfig,
                       TurboReceiver, WordOutcome, parse_detector)
from .scaling import DEFAULT_COVERAGE, LlrScaler, scale_decoder_llrs

__all__ = [
    'ChannelCodec', 'CodeConfig', 'CodeKind',
    'ErrorCounter', 'accumulate_metrics', 'wilson_stderr',
    'CsiConfig', 'DetectorKind', 'SoftDetector', 'Transmission', 'TurboConfig',
    'TurboReceiver', 'WordOutcome', 'parse_detector',
    'DEFAULT_COVERAGE', 'LlrScaler', 'scale_decoder_llrs',
]
