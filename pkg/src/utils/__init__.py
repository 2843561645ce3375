"""
Utilities Module
Common utility functions and helpers
"""

from .data_validation import ConfigValidator
from .helpers import (
    db_to_linear,
    linear_to_db,
    format_number,
    int_to_bits,
    bits_to_int,
    git_revision
)
from .logging_config import setup_logging

__all__ = [
    'ConfigValidator',
    'db_to_linear',
    'linear_to_db',
    'format_number',
    'int_to_bits',
    'bits_to_int',
    'git_revision',
    'setup_logging'
]
