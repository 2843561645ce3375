"""
Receiver Complexity Calculator
Real-valued multiplication counts of one codeword detection over I turbo
iterations: C_det1 for the first pass and C_deti for each later pass.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List

from ..utils.exceptions import UnknownAlgorithm

logger = logging.getLogger(__name__)

ALGORITHMS = ('mmse-pic', 'ep', 'dep', 'gepnet')
DEFAULT_ETAS = (1.0, 0.410, 0.313, 0.186, 0.066)


@dataclass(frozen=True)
class ComplexityQuery:
    algorithm: str
    N: int = 8
    K: int = 8
    M: int = 4
    T: int = 5
    I: int = 2
    n_u: int = 8
    n_h1: int = 64
    n_h2: int = 32
    L: int = 2
    eta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'algorithm', normalize_algorithm(self.algorithm))
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if min(self.N, self.K, self.M, self.T, self.I) < 1:
            raise ValueError("N, K, M, T and I must be positive")


def normalize_algorithm(name: str) -> str:
    key = str(name).strip().lower().replace('_', '-')
    if key in ('mmse', 'mmsepic', 'lmmse-pic'):
        key = 'mmse-pic'
    if key in ('ext-gepnet', 'gepnet-app'):
        key = 'gepnet'
    if key not in ALGORITHMS:
        raise UnknownAlgorithm(f"Unknown algorithm '{name}'; choose from {list(ALGORITHMS)}")
    return key


def _gnn_cost(q: ComplexityQuery) -> float:
    k, m = q.K, q.M
    propagation = ((2 * q.n_u + 2) * q.n_h1 + q.n_h1 * q.n_h2 + q.n_h2 * q.n_u) \
        * q.L * q.T * k * (k - 1) * q.eta
    update = (4 * q.n_u + 3 * q.n_h1 + 9) * q.n_h1 * k * q.L * q.T
    ep_and_readout = (k ** 3 + k ** 2 + 13 * k + 2 * m * k
                      + (q.n_u * q.n_h1 + q.n_h1 * q.n_h2 + q.n_h2 * m) * k) * q.T
    return propagation + update + ep_and_readout


def complexity_split(query: ComplexityQuery) -> Dict[str, float]:
    """First-pass and later-pass costs plus the I-iteration total"""
    n, k, m, t = query.N, query.K, query.M, query.T
    if query.algorithm == 'mmse-pic':
        first = n * k ** 2 + n * k + k ** 3 + 4 * k ** 2 + (m + 3) * k
        later = first + 3 * m * k
    elif query.algorithm in ('ep', 'dep'):
        first = n * k ** 2 + n * k + (k ** 3 + k ** 2 + 13 * k + 2 * m * k) * t
        later = first + 2 * m * k * t + (8 if query.algorithm == 'dep' else 3) * m * k
    else:
        first = _gnn_cost(query)
        later = first + k * math.log2(m) + 2 * m * k * t + 3 * m * k
    total = first + (query.I - 1) * later
    return {'c_det1': float(first), 'c_deti': float(later), 'total': float(total)}


def complexity_rvm(query: ComplexityQuery) -> float:
    return complexity_split(query)['total']


def complexity_table(base: ComplexityQuery, etas: Iterable[float] = DEFAULT_ETAS) -> List[Dict]:
    """One row per algorithm, and one GEPNet row per eta"""
    rows = []
    for algorithm in ALGORITHMS:
        sweep = etas if algorithm == 'gepnet' else (base.eta,)
        for eta in sweep:
            query = ComplexityQuery(**{**asdict(base), 'algorithm': algorithm, 'eta': eta})
            row = {'algorithm': algorithm, 'eta': eta if algorithm == 'gepnet' else None}
            row.update(complexity_split(query))
            rows.append(row)
    return rows
