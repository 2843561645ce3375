"""
Channel Module
Channel realizations, real-valued decomposition, calibrated AWGN and
pilot-based LMMSE estimation
"""

from .models import ChannelKind, ChannelModelSpec, RealChannelInstance
from .generation import (
    exponential_correlation,
    sample_complex_channel,
    generate_complex_channel,
    generate_channel,
    normalize_columns,
    complex_to_real,
    noise_variance,
    apply_awgn
)
from .estimation import (
    dft_pilot_matrix,
    transmit_pilots,
    channel_covariance,
    lmmse_channel_estimate,
    lmmse_estimation_mse
)

__all__ = [
    'ChannelKind',
    'ChannelModelSpec',
    'RealChannelInstance',
    'exponential_correlation',
    'sample_complex_channel',
    'generate_complex_channel',
    'generate_channel',
    'normalize_columns',
    'complex_to_real',
    'noise_variance',
    'apply_awgn',
    'dft_pilot_matrix',
    'transmit_pilots',
    'channel_covariance',
    'lmmse_channel_estimate',
    'lmmse_estimation_mse'
]
