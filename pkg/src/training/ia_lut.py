"""
Mutual-Information Lookup Table
J_A(mu) = 1 - E[log2(1 + e^-L)] for L ~ N(mu, 2 mu) is inverted on the
fixed I_A set by bisection.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from ..config.settings import NUMERIC_CONFIG
from ..numerics.quadrature import gauss_hermite_expect
from ..numerics.rng import SeededRng
from ..utils.exceptions import NumericalDomain

logger = logging.getLogger(__name__)

IA_SET = (0.0, 0.33, 0.67, 0.78, 0.89, 0.94, 0.99, 1.0)
BISECTION_LOWER = 1e-9


def j_function(mu: float, nodes: Optional[int] = None) -> float:
    """Mutual information between a bit and its consistent Gaussian LLR"""
    if mu <= 0.0:
        return 0.0
    expectation = gauss_hermite_expect(lambda llr: np.logaddexp(0.0, -llr) / math.log(2.0),
                                       mu, 2.0 * mu, nodes)
    return 1.0 - expectation


@dataclass(frozen=True)
class IaLut:
    ia_values: Tuple[float, ...]
    mu_values: Tuple[float, ...]

    def mu_for(self, ia: float) -> float:
        """Exact set membership; no interpolation"""
        for value, mu in zip(self.ia_values, self.mu_values):
            if value == ia:
                return mu
        raise ValueError(f"I_A={ia} is not in the lookup table {self.ia_values}")


def build_ia_lut(nodes: Optional[int] = None, ia_set: Sequence[float] = IA_SET,
                 cap: Optional[float] = None) -> IaLut:
    cap = NUMERIC_CONFIG['mu_a_cap'] if cap is None else cap
    mus = []
    for ia in ia_set:
        if ia <= 0.0:
            mus.append(0.0)
        elif ia >= 1.0:
            mus.append(float(cap))
        else:
            try:
                mu = bisect(lambda m: j_function(m, nodes) - ia, BISECTION_LOWER, cap,
                            xtol=1e-12, maxiter=200)
            except (ValueError, RuntimeError) as e:
                raise NumericalDomain(f"Could not invert J_A at I_A={ia}: {e}") from e
            mus.append(float(mu))
    logger.debug(f"I_A lookup table: {dict(zip(ia_set, mus))}")
    return IaLut(tuple(float(v) for v in ia_set), tuple(mus))


def sample_prior_llrs(bits: np.ndarray, ia: float, lut: IaLut, rng: SeededRng) -> np.ndarray:
    """L ~ N((2c - 1) mu_A, 2 mu_A) per bit"""
    mu = lut.mu_for(ia)
    bits = np.asarray(bits)
    noise = rng.standard_normal(bits.shape)
    return (2.0 * bits - 1.0) * mu + math.sqrt(2.0 * mu) * noise


def sample_mixed_prior_llrs(bits: np.ndarray, lut: IaLut, rng: SeededRng,
                            ia_choices: Optional[Sequence[float]] = None
                            ) -> Tuple[np.ndarray, np.ndarray]:
    """One I_A drawn per row of `bits` (..., J); returns (llrs, chosen I_A)"""
    ia_choices = lut.ia_values if ia_choices is None else tuple(ia_choices)
    bits = np.asarray(bits)
    picks = rng.integers(0, len(ia_choices), size=bits.shape[:-1])
    ia = np.asarray(ia_choices, dtype=np.float64)[picks]
    mu = np.asarray([lut.mu_for(value) for value in ia_choices], dtype=np.float64)[picks]
    noise = rng.standard_normal(bits.shape)
    llrs = (2.0 * bits - 1.0) * mu[..., None] + np.sqrt(2.0 * mu)[..., None] * noise
    return llrs, ia
