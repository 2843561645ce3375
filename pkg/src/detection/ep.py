"""
Expectation Propagation MIMO Detector
Every array may carry leading batch axes; symbols live on the last axis.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..channel.models import RealChannelInstance
from ..config.settings import NUMERIC_CONFIG
from ..modem.constellation import Constellation
from ..modem.mapping import gaussian_log_pdf_on_levels, gaussian_to_llrs, prior_moments
from ..numerics.linalg import spd_inverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpConfig:
    layers: int = 5
    damping: float = 0.2
    var_floor: float = NUMERIC_CONFIG['var_floor']
    llr_clip: float = NUMERIC_CONFIG['llr_clip']
    skip_final_update: bool = True

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError(f"EP needs at least one layer, got {self.layers}")
        if not 0.0 <= self.damping <= 1.0:
            raise ValueError(f"Damping must lie in [0, 1], got {self.damping}")
        if not self.var_floor > 0:
            raise ValueError("Variance floor must be positive")


@dataclass
class EpState:
    """Natural parameters, LMMSE moments, cavity and posterior moments of one layer"""
    gamma: np.ndarray
    lam: np.ndarray
    mu: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None
    x_e: Optional[np.ndarray] = None
    v_e: Optional[np.ndarray] = None
    xhat: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None

    def snapshot(self) -> 'EpState':
        return replace(self, **{name: None if value is None else value.copy()
                                for name, value in self.__dict__.items()})


@dataclass
class EpResult:
    x_e: np.ndarray
    v_e: np.ndarray
    llrs: np.ndarray
    xhat: np.ndarray
    v: np.ndarray
    posterior: np.ndarray
    trace: List[EpState] = field(default_factory=list)


def ep_init(prior_pdfs: Optional[np.ndarray], constellation: Constellation,
            shape: Optional[Tuple[int, ...]] = None, var_floor: Optional[float] = None) -> EpState:
    """Initial (gamma, lambda)

    Without priors: gamma = 0, lambda = 1/E_s over `shape` = batch + (K,).
    With priors: lambda = 1/var(p_A1), gamma = lambda * mean(p_A1).
    """
    var_floor = NUMERIC_CONFIG['var_floor'] if var_floor is None else var_floor
    if prior_pdfs is None:
        if shape is None:
            raise ValueError("shape is required when no priors are given")
        return EpState(gamma=np.zeros(shape), lam=np.full(shape, 1.0 / constellation.es))

    mean, variance = prior_moments(prior_pdfs, constellation)
    lam = 1.0 / np.maximum(variance, var_floor)
    return EpState(gamma=lam * mean, lam=lam)


def lmmse_step(state: EpState, instance: RealChannelInstance) -> Tuple[np.ndarray, np.ndarray]:
    """Sigma = (H^T H / s2 + diag(lambda))^-1, mu = Sigma (H^T y / s2 + gamma)"""
    H, y = instance.H, instance.y
    inv_noise = 1.0 / instance.sigma_w2
    gram = np.swapaxes(H, -1, -2) @ H
    precision = gram * inv_noise[..., None, None]
    k = H.shape[-1]
    precision[..., np.arange(k), np.arange(k)] += state.lam
    sigma = spd_inverse(precision)
    target = np.einsum('...nk,...n->...k', H, y) * inv_noise[..., None] + state.gamma
    mu = np.einsum('...ij,...j->...i', sigma, target)
    return mu, sigma


def cavity(state: EpState, var_floor: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Divide each site factor out of the LMMSE marginal

    The cavity precision 1/Sigma_kk - lambda_k is formed from the unfloored
    marginal; only that precision and the resulting variance are floored.
    Saturated priors push Sigma_kk below the floor.
    """
    var_floor = NUMERIC_CONFIG['var_floor'] if var_floor is None else var_floor
    marginal = np.maximum(np.diagonal(state.sigma, axis1=-2, axis2=-1), np.finfo(np.float64).tiny)
    precision = 1.0 / marginal - state.lam
    v_e = np.maximum(1.0 / np.maximum(precision, var_floor), var_floor)
    x_e = v_e * (state.mu / marginal - state.gamma)
    return x_e, v_e


def discrete_posterior(log_factor: np.ndarray, prior_pdfs: Optional[np.ndarray],
                       constellation: Constellation, var_floor: Optional[float] = None
                       ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalize factor x prior over the levels and return (mean, variance, pdf)"""
    var_floor = NUMERIC_CONFIG['var_floor'] if var_floor is None else var_floor
    log_post = np.asarray(log_factor, dtype=np.float64)
    if prior_pdfs is not None:
        with np.errstate(divide='ignore'):
            log_post = log_post + np.log(prior_pdfs)
    log_post = log_post - logsumexp(log_post, axis=-1, keepdims=True)
    pdf = np.exp(log_post)
    mean, variance = prior_moments(pdf, constellation)
    return mean, np.maximum(variance, var_floor), pdf


def posterior_moments(x_e: np.ndarray, v_e: np.ndarray, prior_pdfs: Optional[np.ndarray],
                      constellation: Constellation, var_floor: Optional[float] = None
                      ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Moments of N(a; x_e, v_e) p_A1(a) over the levels"""
    return discrete_posterior(gaussian_log_pdf_on_levels(x_e, v_e, constellation),
                              prior_pdfs, constellation, var_floor)


def natural_update(state: EpState, xhat: np.ndarray, v: np.ndarray,
                   damping: float) -> Tuple[np.ndarray, np.ndarray]:
    """Moment-matched site update with negativity guard, then damping

    Components whose new precision is not positive keep their previous
    (gamma, lambda).
    """
    with np.errstate(divide='ignore', invalid='ignore'):
        lam_new = 1.0 / v - 1.0 / state.v_e
        gamma_new = xhat / v - state.x_e / state.v_e
    accept = lam_new > 0.0
    lam = np.where(accept, damping * lam_new + (1.0 - damping) * state.lam, state.lam)
    gamma = np.where(accept, damping * gamma_new + (1.0 - damping) * state.gamma, state.gamma)
    return gamma, lam


def ep_detect(instance: RealChannelInstance, prior_pdfs: Optional[np.ndarray],
              config: EpConfig, constellation: Constellation, record: bool = False) -> EpResult:
    """Run T EP layers and demap the final extrinsic Gaussian"""
    state = ep_init(prior_pdfs, constellation, instance.batch_shape + (instance.K,),
                    config.var_floor)
    trace = []
    posterior = None
    for t in range(1, config.layers + 1):
        state.mu, state.sigma = lmmse_step(state, instance)
        state.x_e, state.v_e = cavity(state, config.var_floor)
        state.xhat, state.v, posterior = posterior_moments(
            state.x_e, state.v_e, prior_pdfs, constellation, config.var_floor)
        if record:
            trace.append(state.snapshot())
        if t < config.layers or not config.skip_final_update:
            state.gamma, state.lam = natural_update(state, state.xhat, state.v, config.damping)

    llrs = gaussian_to_llrs(state.x_e, state.v_e, constellation, config.llr_clip)
    return EpResult(
        x_e=state.x_e,
        v_e=state.v_e,
        llrs=llrs.reshape(llrs.shape[:-2] + (-1,)),
        xhat=state.xhat,
        v=state.v,
        posterior=posterior,
        trace=trace,
    )
