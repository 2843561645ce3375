"""
Modem Module
Gray-coded PAM constellations from square QAM and the PDF <-> LLR conversions
"""

from .constellation import Constellation
from .mapping import (
    modulate,
    symbol_indices,
    demodulate_hard,
    log_prior_from_llrs,
    prior_pdf_from_llrs,
    prior_moments,
    gaussian_log_pdf_on_levels,
    gaussian_pdf_on_levels,
    log_pdf_to_llrs,
    pdf_to_extrinsic_llrs,
    gaussian_to_llrs
)

__all__ = [
    'Constellation',
    'modulate',
    'symbol_indices',
    'demodulate_hard',
    'log_prior_from_llrs',
    'prior_pdf_from_llrs',
    'prior_moments',
    'gaussian_log_pdf_on_levels',
    'gaussian_pdf_on_levels',
    'log_pdf_to_llrs',
    'pdf_to_extrinsic_llrs',
    'gaussian_to_llrs'
]
