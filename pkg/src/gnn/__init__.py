"""
GNN Module
Pair-wise MRF message passing with GRU node updates, exact reverse pass
and Adam
"""

from .params import (
    GnnHyperparams,
    GnnParameters,
    parameter_shapes,
    glorot_normal,
    glorot_init,
    zero_init
)
from .network import (
    GnnRuntimeState,
    ForwardTape,
    node_input_features,
    edge_features,
    full_mask,
    init_node_features,
    start_state,
    message_pass_round,
    readout,
    run_layer,
    forward_layers,
    backward
)
from .optimizer import AdamState, adam_step

__all__ = [
    'GnnHyperparams',
    'GnnParameters',
    'parameter_shapes',
    'glorot_normal',
    'glorot_init',
    'zero_init',
    'GnnRuntimeState',
    'ForwardTape',
    'node_input_features',
    'edge_features',
    'full_mask',
    'init_node_features',
    'start_state',
    'message_pass_round',
    'readout',
    'run_layer',
    'forward_layers',
    'backward',
    'AdamState',
    'adam_step'
]
