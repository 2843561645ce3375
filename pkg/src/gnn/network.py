"""
Pair-wise MRF Graph Neural Network
Node k carries u_k (N_u) and the GRU state g_k (N_h1). Edge arrays are
indexed [source j, destination k]; the message from j to k is
M([u_k, u_j, f_jk]). Node and GRU states carry over from one GEPNet layer
to the next, so one ForwardTape spans every layer of a detection.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..channel.models import RealChannelInstance
from .layers import (
    dense_backward,
    dense_forward,
    gru_backward,
    gru_forward,
    mlp_backward,
    mlp_forward,
    stable_softmax
)
from .params import GnnParameters

logger = logging.getLogger(__name__)


@dataclass
class GnnRuntimeState:
    """Per-node features plus the graph of the current layer"""
    u: np.ndarray
    g: np.ndarray
    edge_feat: np.ndarray
    node_attr: Optional[np.ndarray] = None
    mask: Optional[np.ndarray] = None


@dataclass
class LayerRecord:
    rounds: List[dict] = field(default_factory=list)
    readout: Optional[dict] = None


@dataclass
class ForwardTape:
    """Activations needed by the reverse pass"""
    init_features: np.ndarray
    layers: List[LayerRecord] = field(default_factory=list)


def node_input_features(instance: RealChannelInstance) -> np.ndarray:
    """[y^T h_k, h_k^T h_k, sigma_w2] per node, shape (..., K, 3)"""
    H = instance.H
    yh = np.einsum('...nk,...n->...k', H, instance.y)
    hh = np.einsum('...nk,...nk->...k', H, H)
    sigma = np.broadcast_to(instance.sigma_w2[..., None], yh.shape)
    return np.stack([yh, hh, sigma], axis=-1)


def edge_features(instance: RealChannelInstance) -> np.ndarray:
    """f_jk = [h_k^T h_j, sigma_w2], shape (..., K, K, 2)"""
    gram = np.swapaxes(instance.H, -1, -2) @ instance.H
    sigma = np.broadcast_to(instance.sigma_w2[..., None, None], gram.shape)
    return np.stack([gram, sigma], axis=-1)


def full_mask(shape: Tuple[int, ...]) -> np.ndarray:
    """All directed edges j -> k with j != k; shape = batch + (K,)"""
    k = shape[-1]
    return np.broadcast_to(~np.eye(k, dtype=bool), shape[:-1] + (k, k)).copy()


def init_node_features(instance: RealChannelInstance, params: GnnParameters
                       ) -> Tuple[np.ndarray, np.ndarray]:
    """u0 = W1 [y^T h_k, h_k^T h_k, sigma_w2] + b1; returns (u0, input features)"""
    features = node_input_features(instance)
    return dense_forward(features, params['init_w'], params['init_b']), features


def start_state(instance: RealChannelInstance, params: GnnParameters
                ) -> Tuple[GnnRuntimeState, ForwardTape]:
    """Layer-1 state: u from the node features, g = 0"""
    u, features = init_node_features(instance, params)
    g = np.zeros(u.shape[:-1] + (params.hyperparams.n_h1,))
    return GnnRuntimeState(u=u, g=g, edge_feat=edge_features(instance)), ForwardTape(features)


def _pair_inputs(u: np.ndarray, edge_feat: np.ndarray) -> np.ndarray:
    k = u.shape[-2]
    destination = np.broadcast_to(u[..., None, :, :], u.shape[:-2] + (k, k, u.shape[-1]))
    source = np.broadcast_to(u[..., :, None, :], destination.shape)
    return np.concatenate([destination, source, edge_feat], axis=-1)


def message_pass_round(state: GnnRuntimeState, params: GnnParameters
                       ) -> Tuple[GnnRuntimeState, dict]:
    """One propagation/aggregation/update round

    Pruned edges (mask False) contribute exactly zero to the sum.
    """
    mask = state.mask[..., None].astype(np.float64)
    pairs = _pair_inputs(state.u, state.edge_feat)
    messages, mlp_cache = mlp_forward(pairs, params, 'msg')
    aggregated = (messages * mask).sum(axis=-3)
    gru_in = np.concatenate([aggregated, state.node_attr], axis=-1)
    g_new, gru_cache = gru_forward(gru_in, state.g, params)
    u_new = dense_forward(g_new, params['out_w'], params['out_b'])

    cache = {'mask': mask, 'mlp': mlp_cache, 'gru': gru_cache, 'g_new': g_new}
    new_state = GnnRuntimeState(u=u_new, g=g_new, edge_feat=state.edge_feat,
                                node_attr=state.node_attr, mask=state.mask)
    return new_state, cache


def readout(state: GnnRuntimeState, params: GnnParameters) -> Tuple[np.ndarray, np.ndarray, dict]:
    """Logits z_k = R(u_k) and q_G = softmax(z)"""
    logits, cache = mlp_forward(state.u, params, 'read')
    return logits, stable_softmax(logits), cache


def run_layer(state: GnnRuntimeState, node_attr: np.ndarray, mask: np.ndarray,
              params: GnnParameters, tape: Optional[ForwardTape] = None
              ) -> Tuple[GnnRuntimeState, np.ndarray, np.ndarray]:
    """L rounds on this layer's graph followed by the readout

    Returns the carried-over state, logits and q_G.
    """
    state = GnnRuntimeState(u=state.u, g=state.g, edge_feat=state.edge_feat,
                            node_attr=node_attr, mask=mask)
    record = LayerRecord()
    for _ in range(params.hyperparams.rounds):
        state, cache = message_pass_round(state, params)
        record.rounds.append(cache)
    logits, q, record.readout = readout(state, params)
    if tape is not None:
        tape.layers.append(record)
    return state, logits, q


def forward_layers(instance: RealChannelInstance, params: GnnParameters,
                   node_attrs: Sequence[np.ndarray], masks: Sequence[np.ndarray]
                   ) -> Tuple[List[np.ndarray], List[np.ndarray], ForwardTape]:
    """GNN-only forward over fixed per-layer node attributes and masks"""
    state, tape = start_state(instance, params)
    all_logits, all_q = [], []
    for node_attr, mask in zip(node_attrs, masks):
        state, logits, q = run_layer(state, node_attr, mask, params, tape)
        all_logits.append(logits)
        all_q.append(q)
    return all_logits, all_q, tape


def _round_backward(du: np.ndarray, dg: np.ndarray, cache: dict, params: GnnParameters,
                    grads: Dict[str, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    n_u = params.hyperparams.n_u
    dg_out, dw, db = dense_backward(du, cache['g_new'], params['out_w'])
    grads['out_w'] += dw
    grads['out_b'] += db
    dm, dg_prev, gru_grads = gru_backward(dg + dg_out, cache['gru'], params)
    for name, value in gru_grads.items():
        grads[name] += value

    daggregated = dm[..., :n_u]
    dmessages = daggregated[..., None, :, :] * cache['mask']
    dpairs, mlp_grads = mlp_backward(dmessages, cache['mlp'], params, 'msg')
    for name, value in mlp_grads.items():
        grads[name] += value

    du_prev = dpairs[..., :n_u].sum(axis=-3) + dpairs[..., n_u:2 * n_u].sum(axis=-2)
    return du_prev, dg_prev


def backward(tape: ForwardTape, params: GnnParameters,
             dlogits: Sequence[Optional[np.ndarray]]) -> GnnParameters:
    """Reverse pass over every recorded layer

    dlogits[t] is the upstream gradient on layer t's logits or None when
    that readout does not reach the loss.
    """
    if len(dlogits) != len(tape.layers):
        raise ValueError(f"Need one logits gradient per layer ({len(tape.layers)}), got {len(dlogits)}")

    grads = {name: np.zeros_like(tensor) for name, tensor in params.items()}
    last = tape.layers[-1].readout
    du = np.zeros_like(last['x'])
    dg = np.zeros(du.shape[:-1] + (params.hyperparams.n_h1,))

    for record, dz in zip(reversed(tape.layers), reversed(list(dlogits))):
        if dz is not None:
            du_read, read_grads = mlp_backward(dz, record.readout, params, 'read')
            du = du + du_read
            for name, value in read_grads.items():
                grads[name] += value
        for cache in reversed(record.rounds):
            du, dg = _round_backward(du, dg, cache, params, grads)

    _, dw, db = dense_backward(du, tape.init_features, params['init_w'])
    grads['init_w'] += dw
    grads['init_b'] += db
    return GnnParameters(params.hyperparams, params.num_classes, grads)
