"""
Detection Module
EP detector core with LMMSE and exhaustive MAP reference detectors
"""

from .ep import (
    EpConfig,
    EpState,
    EpResult,
    ep_init,
    lmmse_step,
    cavity,
    discrete_posterior,
    posterior_moments,
    natural_update,
    ep_detect
)
from .baselines import MapResult, LmmseResult, map_oracle, lmmse_detect

__all__ = [
    'EpConfig',
    'EpState',
    'EpResult',
    'ep_init',
    'lmmse_step',
    'cavity',
    'discrete_posterior',
    'posterior_moments',
    'natural_update',
    'ep_detect',
    'MapResult',
    'LmmseResult',
    'map_oracle',
    'lmmse_detect'
]
