"""
Adam Optimizer
"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .params import GnnParameters


@dataclass
class AdamState:
    first_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0


def adam_step(params: GnnParameters, grads: GnnParameters, state: AdamState,
              lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> GnnParameters:
    """One bias-corrected Adam update; `state` is advanced in place"""
    state.step += 1
    correction1 = 1.0 - beta1 ** state.step
    correction2 = 1.0 - beta2 ** state.step

    updated = {}
    for name, tensor in params.items():
        grad = grads[name]
        m = state.first_moment.get(name, np.zeros_like(tensor))
        v = state.second_moment.get(name, np.zeros_like(tensor))
        m = beta1 * m + (1.0 - beta1) * grad
        v = beta2 * v + (1.0 - beta2) * grad ** 2
        state.first_moment[name] = m
        state.second_moment[name] = v
        updated[name] = tensor - lr * (m / correction1) / (np.sqrt(v / correction2) + eps)
    return GnnParameters(params.hyperparams, params.num_classes, updated)
