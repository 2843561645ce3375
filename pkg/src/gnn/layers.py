"""
Differentiable Building Blocks
Each forward returns (output, cache); each backward takes the upstream
gradient and the cache and returns (input gradient, parameter gradients).
Leading axes of the inputs are batch axes.
"""

from typing import Dict, Tuple

import numpy as np
from scipy.special import expit, softmax

Cache = Dict[str, np.ndarray]


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    return x @ w.T + b


def dense_backward(dy: np.ndarray, x: np.ndarray, w: np.ndarray
                   ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (dx, dw, db)"""
    flat_dy = dy.reshape(-1, dy.shape[-1])
    flat_x = x.reshape(-1, x.shape[-1])
    return dy @ w, flat_dy.T @ flat_x, flat_dy.sum(axis=0)


def mlp_forward(x: np.ndarray, params, prefix: str) -> Tuple[np.ndarray, Cache]:
    """Three dense layers, ReLU after the first two"""
    pre1 = dense_forward(x, params[f'{prefix}_w1'], params[f'{prefix}_b1'])
    h1 = np.maximum(pre1, 0.0)
    pre2 = dense_forward(h1, params[f'{prefix}_w2'], params[f'{prefix}_b2'])
    h2 = np.maximum(pre2, 0.0)
    out = dense_forward(h2, params[f'{prefix}_w3'], params[f'{prefix}_b3'])
    return out, {'x': x, 'pre1': pre1, 'h1': h1, 'pre2': pre2, 'h2': h2}


def mlp_backward(dout: np.ndarray, cache: Cache, params, prefix: str
                 ) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    grads = {}
    dh2, grads[f'{prefix}_w3'], grads[f'{prefix}_b3'] = dense_backward(
        dout, cache['h2'], params[f'{prefix}_w3'])
    dpre2 = dh2 * (cache['pre2'] > 0.0)
    dh1, grads[f'{prefix}_w2'], grads[f'{prefix}_b2'] = dense_backward(
        dpre2, cache['h1'], params[f'{prefix}_w2'])
    dpre1 = dh1 * (cache['pre1'] > 0.0)
    dx, grads[f'{prefix}_w1'], grads[f'{prefix}_b1'] = dense_backward(
        dpre1, cache['x'], params[f'{prefix}_w1'])
    return dx, grads


def gru_forward(m: np.ndarray, g: np.ndarray, params) -> Tuple[np.ndarray, Cache]:
    """g' = (1 - z) * n + z * g with reset gate applied before the candidate's recurrence"""
    z = expit(m @ params['gru_wz'].T + g @ params['gru_uz'].T + params['gru_bz'])
    r = expit(m @ params['gru_wr'].T + g @ params['gru_ur'].T + params['gru_br'])
    rg = r * g
    n = np.tanh(m @ params['gru_wn'].T + rg @ params['gru_un'].T + params['gru_bn'])
    g_new = (1.0 - z) * n + z * g
    return g_new, {'m': m, 'g': g, 'z': z, 'r': r, 'rg': rg, 'n': n}


def gru_backward(dg_new: np.ndarray, cache: Cache, params
                 ) -> Tuple[np.ndarray, np.ndarray, Dict[str, np.ndarray]]:
    """Returns (dm, dg, parameter gradients)"""
    m, g, z, r, rg, n = (cache[key] for key in ('m', 'g', 'z', 'r', 'rg', 'n'))
    grads = {}

    dn_pre = dg_new * (1.0 - z) * (1.0 - n ** 2)
    dz_pre = dg_new * (g - n) * z * (1.0 - z)
    dg = dg_new * z

    dm, grads['gru_wn'], grads['gru_bn'] = dense_backward(dn_pre, m, params['gru_wn'])
    drg, grads['gru_un'], _ = dense_backward(dn_pre, rg, params['gru_un'])
    dg = dg + drg * r
    dr_pre = drg * g * r * (1.0 - r)

    dm_z, grads['gru_wz'], grads['gru_bz'] = dense_backward(dz_pre, m, params['gru_wz'])
    dg_z, grads['gru_uz'], _ = dense_backward(dz_pre, g, params['gru_uz'])
    dm_r, grads['gru_wr'], grads['gru_br'] = dense_backward(dr_pre, m, params['gru_wr'])
    dg_r, grads['gru_ur'], _ = dense_backward(dr_pre, g, params['gru_ur'])

    return dm + dm_z + dm_r, dg + dg_z + dg_r, grads


def stable_softmax(logits: np.ndarray) -> np.ndarray:
    return softmax(logits, axis=-1)
