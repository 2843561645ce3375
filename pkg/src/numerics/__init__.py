"""
Numerics Module
Dense SPD inversion, Gauss-Hermite expectations and counter-based RNG streams
"""

from .linalg import spd_inverse, failing_pivot
from .quadrature import gauss_hermite_expect
from .rng import SeededRng, STREAM_IDS

__all__ = [
    'spd_inverse',
    'failing_pivot',
    'gauss_hermite_expect',
    'SeededRng',
    'STREAM_IDS'
]
