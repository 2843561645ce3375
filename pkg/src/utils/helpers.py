"""
General Utility Functions
"""

import math
import subprocess
import logging
from pathlib import Path
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


def db_to_linear(snr_db: float) -> float:
    """Convert a decibel ratio to linear scale"""
    if math.isinf(snr_db):
        return math.inf if snr_db > 0 else 0.0
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear ratio to decibels"""
    if value <= 0:
        return -math.inf
    return 10.0 * math.log10(value)


def format_number(value, decimal_places=3):
    """Format number in engineering-style scientific notation"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'N/A'
    return f"{value:.{decimal_places}e}"


def int_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    """Expand integers into MSB-first bit rows"""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1)
    return ((values[..., None] >> shifts) & 1).astype(np.int8)


def bits_to_int(bits: np.ndarray) -> np.ndarray:
    """Collapse MSB-first bit rows into integers"""
    bits = np.asarray(bits, dtype=np.int64)
    width = bits.shape[-1]
    weights = 1 << np.arange(width - 1, -1, -1)
    return bits @ weights


def git_revision(repo_dir: Optional[Path] = None) -> str:
    """Short git revision of the working tree, 'unknown' outside a repository"""
    try:
        result = subprocess.run(
            ['git', 'rev-parse', '--short', 'HEAD'],
            cwd=str(repo_dir) if repo_dir else None,
            capture_output=True, text=True, timeout=5, check=True,
        )
        return result.stdout.strip() or 'unknown'
    except (OSError, subprocess.SubprocessError):
        logger.debug("git revision unavailable")
        return 'unknown'
