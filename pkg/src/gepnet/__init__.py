"""
GEPNet Module
EP with an embedded GNN, edge pruning, output heads and weight archives
"""

from .pruning import correlation_coefficients, prune_edges, retention_fraction, measure_retention
from .heads import app_llr_head, ext_llr_head, subtract_prior, bit_llrs_from_logits, bit_llrs_backward
from .model import (
    OutputHead,
    PruningMode,
    GepnetConfig,
    GepnetOutput,
    gepnet_forward,
    detector_llrs,
    masked_extrinsic_llrs
)
from .archive import ARCHIVE_EXTENSION, WeightArchive, serialize, deserialize

__all__ = [
    'correlation_coefficients',
    'prune_edges',
    'retention_fraction',
    'measure_retention',
    'app_llr_head',
    'ext_llr_head',
    'subtract_prior',
    'bit_llrs_from_logits',
    'bit_llrs_backward',
    'OutputHead',
    'PruningMode',
    'GepnetConfig',
    'GepnetOutput',
    'gepnet_forward',
    'detector_llrs',
    'masked_extrinsic_llrs',
    'ARCHIVE_EXTENSION',
    'WeightArchive',
    'serialize',
    'deserialize'
]
