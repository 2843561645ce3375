"""
Gaussian Expectations by Gauss-Hermite Quadrature
"""

from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from ..config.settings import NUMERIC_CONFIG
from ..utils.exceptions import NumericalDomain

MIN_NODES = 16


@lru_cache(maxsize=16)
def _rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    points, weights = hermegauss(nodes)
    # probabilists' weight exp(-x^2/2) integrates to sqrt(2 pi)
    return points, weights / np.sqrt(2.0 * np.pi)


def gauss_hermite_expect(f: Callable[[np.ndarray], np.ndarray], mean: float,
                         variance: float, nodes: Optional[int] = None) -> float:
    """E[f(L)] for L ~ N(mean, variance)

    `f` is called once with the vector of scaled quadrature points.
    """
    nodes = NUMERIC_CONFIG['quadrature_nodes'] if nodes is None else int(nodes)
    if nodes < MIN_NODES:
        raise ValueError(f"Quadrature needs at least {MIN_NODES} nodes, got {nodes}")
    if not variance > 0:
        raise ValueError(f"Variance must be positive, got {variance}")

    points, weights = _rule(nodes)
    values = np.asarray(f(mean + np.sqrt(variance) * points), dtype=np.float64)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    if not np.all(np.isfinite(values)):
        raise NumericalDomain(f"Integrand is not finite for mean={mean}, variance={variance}")
    return float(weights @ values)
