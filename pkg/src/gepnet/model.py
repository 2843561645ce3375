"""
GEPNet Detector
EP layers with the GNN inserted between the LMMSE/cavity stage and the
posterior stage. Priors enter only through ep_init and the posterior
combination q_G * p_A1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
from scipy.special import logsumexp

from ..channel.models import RealChannelInstance
from ..detection.ep import EpConfig, EpState, cavity, discrete_posterior, ep_init, lmmse_step, natural_update
from ..gnn.network import ForwardTape, run_layer, start_state
from ..gnn.params import GnnHyperparams, GnnParameters
from ..modem.constellation import Constellation
from ..modem.mapping import prior_pdf_from_llrs
from .heads import app_llr_head, ext_llr_head, subtract_prior
from .pruning import prune_edges, retention_fraction

logger = logging.getLogger(__name__)


class OutputHead(str, Enum):
    APP = 'app'
    EXT = 'ext'


class PruningMode(str, Enum):
    MATCHED = 'matched'
    POST_HOC = 'post_hoc'


@dataclass(frozen=True)
class GepnetConfig:
    ep: EpConfig = field(default_factory=EpConfig)
    gnn: GnnHyperparams = field(default_factory=GnnHyperparams)
    alpha: float = 0.0
    head: OutputHead = OutputHead.EXT
    pruning_mode: PruningMode = PruningMode.MATCHED

    def __post_init__(self):
        object.__setattr__(self, 'head', OutputHead(self.head))
        object.__setattr__(self, 'pruning_mode', PruningMode(self.pruning_mode))
        if self.alpha < 0:
            raise ValueError(f"Pruning factor must be non-negative, got {self.alpha}")

    @property
    def training_alpha(self) -> float:
        """Post-hoc pruning trains on the full graph"""
        return self.alpha if self.pruning_mode == PruningMode.MATCHED else 0.0


@dataclass
class GepnetOutput:
    logits: List[np.ndarray]
    q_layers: List[np.ndarray]
    posterior: np.ndarray
    trace: List[EpState]
    retention: List[np.ndarray]
    tape: Optional[ForwardTape] = None

    @property
    def q_final(self) -> np.ndarray:
        return self.q_layers[-1]

    @property
    def logits_final(self) -> np.ndarray:
        return self.logits[-1]


def gepnet_forward(instance: RealChannelInstance, prior_pdfs: Optional[np.ndarray],
                   params: GnnParameters, config: GepnetConfig, constellation: Constellation,
                   alpha: Optional[float] = None, record_tape: bool = False) -> GepnetOutput:
    """Run T GEPNet layers

    alpha overrides config.alpha (training uses config.training_alpha).
    """
    alpha = config.alpha if alpha is None else alpha
    ep_cfg = config.ep
    shape = instance.batch_shape + (instance.K,)

    ep_state = ep_init(prior_pdfs, constellation, shape, ep_cfg.var_floor)
    gnn_state, tape = start_state(instance, params)
    logits_layers, q_layers, trace, retention = [], [], [], []
    posterior = None

    for t in range(1, ep_cfg.layers + 1):
        ep_state.mu, ep_state.sigma = lmmse_step(ep_state, instance)
        ep_state.x_e, ep_state.v_e = cavity(ep_state, ep_cfg.var_floor)

        mask = prune_edges(ep_state.sigma, alpha)
        node_attr = np.stack([ep_state.x_e, ep_state.v_e], axis=-1)
        gnn_state, logits, q = run_layer(gnn_state, node_attr, mask, params,
                                         tape if record_tape else None)

        log_q = logits - logsumexp(logits, axis=-1, keepdims=True)
        ep_state.xhat, ep_state.v, posterior = discrete_posterior(
            log_q, prior_pdfs, constellation, ep_cfg.var_floor)

        logits_layers.append(logits)
        q_layers.append(q)
        retention.append(retention_fraction(mask))
        trace.append(ep_state.snapshot())

        if t < ep_cfg.layers or not ep_cfg.skip_final_update:
            ep_state.gamma, ep_state.lam = natural_update(
                ep_state, ep_state.xhat, ep_state.v, ep_cfg.damping)

    return GepnetOutput(logits=logits_layers, q_layers=q_layers, posterior=posterior,
                        trace=trace, retention=retention, tape=tape if record_tape else None)


def detector_llrs(output: GepnetOutput, head: OutputHead, constellation: Constellation,
                  prior_llrs: Optional[np.ndarray] = None, clip: Optional[float] = None
                  ) -> np.ndarray:
    """Extrinsic LLRs handed to the decoder

    EXT head: demapped q_G. APP head: demapped posterior minus the a-priori
    LLRs (the plain APP LLRs when no priors are given).
    """
    if OutputHead(head) == OutputHead.EXT:
        return ext_llr_head(output.q_final, constellation, clip)
    app = app_llr_head(output.posterior, constellation, clip)
    if prior_llrs is None:
        return app
    return subtract_prior(app, prior_llrs, clip)


def masked_extrinsic_llrs(instance: RealChannelInstance, prior_llrs: np.ndarray,
                          params: GnnParameters, config: GepnetConfig,
                          constellation: Constellation, head: Optional[OutputHead] = None,
                          alpha: Optional[float] = None) -> np.ndarray:
    """Output j computed with L_A1(c_j) zeroed, for every j

    instance is unbatched or batched with batch B and prior_llrs (..., J).
    All J masked inferences of a sample run as one batch.
    """
    head = config.head if head is None else OutputHead(head)
    prior_llrs = np.asarray(prior_llrs, dtype=np.float64)
    batch = instance.batch_shape
    n_bits = prior_llrs.shape[-1]
    q = constellation.Q

    masked = np.repeat(prior_llrs[..., None, :], n_bits, axis=-2)
    masked[..., np.arange(n_bits), np.arange(n_bits)] = 0.0

    tiled = RealChannelInstance(
        np.repeat(instance.H[..., None, :, :], n_bits, axis=-3),
        np.repeat(instance.y[..., None, :], n_bits, axis=-2),
        np.repeat(instance.sigma_w2[..., None], n_bits, axis=-1),
    )
    priors = prior_pdf_from_llrs(masked.reshape(batch + (n_bits, -1, q)), constellation)
    output = gepnet_forward(tiled, priors, params, config, constellation, alpha=alpha)
    llrs = detector_llrs(output, head, constellation, prior_llrs=masked)
    return llrs[..., np.arange(n_bits), np.arange(n_bits)]
