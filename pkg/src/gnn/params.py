"""
GNN Parameters
Weights are stored (out_features, in_features) and applied as x @ W.T.
GRU gates are ordered update (z), reset (r), candidate (n).
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Tuple

import numpy as np

from ..numerics.rng import SeededRng
from ..utils.exceptions import DimensionMismatch


@dataclass(frozen=True)
class GnnHyperparams:
    n_u: int = 8
    n_h1: int = 64
    n_h2: int = 32
    rounds: int = 2

    def __post_init__(self):
        for name in ('n_u', 'n_h1', 'n_h2', 'rounds'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    def as_dict(self) -> Dict[str, int]:
        return {'n_u': self.n_u, 'n_h1': self.n_h1, 'n_h2': self.n_h2, 'rounds': self.rounds}


def parameter_shapes(hp: GnnHyperparams, num_classes: int) -> 'OrderedDict[str, Tuple[int, ...]]':
    """Canonical tensor names and shapes, in serialization order"""
    n_u, n_h1, n_h2 = hp.n_u, hp.n_h1, hp.n_h2
    shapes = OrderedDict()
    shapes['init_w'] = (n_u, 3)
    shapes['init_b'] = (n_u,)
    shapes['msg_w1'] = (n_h1, 2 * n_u + 2)
    shapes['msg_b1'] = (n_h1,)
    shapes['msg_w2'] = (n_h2, n_h1)
    shapes['msg_b2'] = (n_h2,)
    shapes['msg_w3'] = (n_u, n_h2)
    shapes['msg_b3'] = (n_u,)
    for gate in ('z', 'r', 'n'):
        shapes[f'gru_w{gate}'] = (n_h1, n_u + 2)
        shapes[f'gru_u{gate}'] = (n_h1, n_h1)
        shapes[f'gru_b{gate}'] = (n_h1,)
    shapes['out_w'] = (n_u, n_h1)
    shapes['out_b'] = (n_u,)
    shapes['read_w1'] = (n_h1, n_u)
    shapes['read_b1'] = (n_h1,)
    shapes['read_w2'] = (n_h2, n_h1)
    shapes['read_b2'] = (n_h2,)
    shapes['read_w3'] = (num_classes, n_h2)
    shapes['read_b3'] = (num_classes,)
    return shapes


class GnnParameters:
    """Named float64 tensors shared by every node and edge"""

    def __init__(self, hyperparams: GnnHyperparams, num_classes: int,
                 tensors: Dict[str, np.ndarray]):
        self.hyperparams = hyperparams
        self.num_classes = int(num_classes)
        expected = parameter_shapes(hyperparams, num_classes)
        missing = set(expected) - set(tensors)
        if missing:
            raise DimensionMismatch(f"Missing parameter tensors: {sorted(missing)}")
        self.tensors = OrderedDict()
        for name, shape in expected.items():
            tensor = np.asarray(tensors[name], dtype=np.float64)
            if tensor.shape != shape:
                raise DimensionMismatch(f"Tensor '{name}' has shape {tensor.shape}, expected {shape}")
            self.tensors[name] = tensor

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def items(self):
        return self.tensors.items()

    def map(self, fn: Callable[[str, np.ndarray], np.ndarray]) -> 'GnnParameters':
        return GnnParameters(self.hyperparams, self.num_classes,
                             {name: fn(name, tensor) for name, tensor in self.tensors.items()})

    def copy(self) -> 'GnnParameters':
        return self.map(lambda _, tensor: tensor.copy())

    def zeros_like(self) -> 'GnnParameters':
        return self.map(lambda _, tensor: np.zeros_like(tensor))

    def equals(self, other: 'GnnParameters') -> bool:
        return (self.hyperparams == other.hyperparams and self.num_classes == other.num_classes
                and all(np.array_equal(self[name], other[name]) for name in self))

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(tensor)) for tensor in self.tensors.values())


def glorot_normal(shape: Tuple[int, ...], rng: SeededRng) -> np.ndarray:
    """Zero-mean normal draw with variance 2 / (fan_in + fan_out)"""
    fan_out = shape[0]
    fan_in = shape[1] if len(shape) > 1 else 1
    return rng.normal(0.0, np.sqrt(2.0 / (fan_in + fan_out)), shape)


def glorot_init(hyperparams: GnnHyperparams, num_classes: int, rng: SeededRng) -> GnnParameters:
    """Glorot-normal weights and zero biases"""
    tensors = {}
    for name, shape in parameter_shapes(hyperparams, num_classes).items():
        tensors[name] = np.zeros(shape) if len(shape) == 1 else glorot_normal(shape, rng)
    return GnnParameters(hyperparams, num_classes, tensors)


def zero_init(hyperparams: GnnHyperparams, num_classes: int) -> GnnParameters:
    return GnnParameters(hyperparams, num_classes,
                         {name: np.zeros(shape)
                          for name, shape in parameter_shapes(hyperparams, num_classes).items()})
