"""
Dense Linear Algebra Kernels
Matrices are float64 numpy arrays; leading axes are treated as a batch.
"""

import logging

import numpy as np
from scipy.linalg import lapack

from ..utils.exceptions import DimensionMismatch, NotPositiveDefinite

logger = logging.getLogger(__name__)


def failing_pivot(a: np.ndarray) -> int:
    """Index of the first non-positive Cholesky pivot, -1 if none fails"""
    a = np.asarray(a, dtype=np.float64)
    for matrix in a.reshape(-1, a.shape[-2], a.shape[-1]):
        _, info = lapack.dpotrf(matrix, lower=1, clean=1)
        if info > 0:
            return int(info) - 1
        if info < 0:
            raise ValueError(f"dpotrf rejected argument {-info}")
    return -1


def spd_inverse(a: np.ndarray) -> np.ndarray:
    """Invert symmetric positive definite matrices through their Cholesky factor

    Accepts a single (K, K) matrix or a stack (..., K, K). The inverse is
    formed as L^-T L^-1 and symmetrized.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatch(f"Expected square matrices, got shape {a.shape}")

    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        pivot = failing_pivot(a)
        raise NotPositiveDefinite(pivot) from None

    n = a.shape[-1]
    eye = np.broadcast_to(np.eye(n), a.shape)
    chol_inv = np.linalg.solve(chol, eye)
    inverse = np.swapaxes(chol_inv, -1, -2) @ chol_inv
    return 0.5 * (inverse + np.swapaxes(inverse, -1, -2))
