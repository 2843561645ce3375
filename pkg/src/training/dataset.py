"""
Training Dataset Generation and Caching
Each sample owns the substream rng.substream('dataset', index), so the
dataset is identical for any worker count. Caches use the tensor
container of utils.binary_io with magic b'GEPD'.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..channel.generation import apply_awgn, generate_channel
from ..channel.models import ChannelModelSpec, RealChannelInstance
from ..modem.constellation import Constellation
from ..modem.mapping import modulate, symbol_indices
from ..numerics.rng import SeededRng
from ..utils.binary_io import read_tensor_file, write_tensor_file
from ..utils.exceptions import DimensionMismatch
from .ia_lut import IA_SET, IaLut, sample_mixed_prior_llrs

logger = logging.getLogger(__name__)

DATASET_MAGIC = b'GEPD'
DATASET_VERSION = 1
DATASET_EXTENSION = '.gepd'
GENERATION_CHUNK = 2048


@dataclass(frozen=True)
class DatasetSpec:
    """What to draw: system, SNR_train and the I_A choices"""
    channel: ChannelModelSpec
    modulation: str
    snr_db: float
    n_samples: int
    ia_set: Tuple[float, ...] = IA_SET
    snr_jitter_db: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'ia_set', tuple(float(v) for v in self.ia_set))
        if self.n_samples < 0:
            raise ValueError(f"Sample count must be non-negative, got {self.n_samples}")
        if self.snr_jitter_db < 0:
            raise ValueError(f"SNR jitter must be non-negative, got {self.snr_jitter_db}")

    def as_dict(self) -> Dict:
        return {
            'n_r': self.channel.n_r, 'n_t': self.channel.n_t,
            'channel_kind': self.channel.kind.value, 'corr_coeff': self.channel.corr_coeff,
            'modulation': self.modulation, 'snr_db': self.snr_db,
            'n_samples': self.n_samples, 'ia_set': list(self.ia_set),
            'snr_jitter_db': self.snr_jitter_db,
        }


@dataclass
class TrainingDataset:
    """Stacked samples: x (D, K), y (D, N), H (D, N, K), sigma_w2 (D,),
    llr_a (D, J) and, after label generation, llr_e (D, J)"""
    x: np.ndarray
    y: np.ndarray
    H: np.ndarray
    sigma_w2: np.ndarray
    llr_a: np.ndarray
    llr_e: Optional[np.ndarray] = None
    meta: Dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.x.shape[0]
        for name in ('y', 'H', 'sigma_w2', 'llr_a'):
            if getattr(self, name).shape[0] != d:
                raise DimensionMismatch(f"Field '{name}' has {getattr(self, name).shape[0]} rows, expected {d}")
        if self.llr_e is not None and self.llr_e.shape != self.llr_a.shape:
            raise DimensionMismatch(f"Label shape {self.llr_e.shape} does not match prior shape {self.llr_a.shape}")

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def has_labels(self) -> bool:
        return self.llr_e is not None

    def instance(self, index=slice(None)) -> RealChannelInstance:
        return RealChannelInstance(self.H[index], self.y[index], self.sigma_w2[index])

    def subset(self, index) -> 'TrainingDataset':
        return TrainingDataset(
            x=self.x[index], y=self.y[index], H=self.H[index],
            sigma_w2=self.sigma_w2[index], llr_a=self.llr_a[index],
            llr_e=None if self.llr_e is None else self.llr_e[index],
            meta=dict(self.meta),
        )

    def with_labels(self, llr_e: np.ndarray) -> 'TrainingDataset':
        return replace(self, llr_e=np.asarray(llr_e, dtype=np.float64), meta=dict(self.meta))

    def symbol_labels(self, constellation: Constellation) -> np.ndarray:
        return symbol_indices(self.x, constellation)

    def prior_llrs(self, constellation: Constellation, index=slice(None)) -> np.ndarray:
        """Priors shaped (..., K, Q)"""
        llr_a = self.llr_a[index]
        return llr_a.reshape(llr_a.shape[:-1] + (self.x.shape[-1], constellation.Q))

    def split(self, validation_samples: int) -> Tuple['TrainingDataset', 'TrainingDataset']:
        """Tail rows become the validation set"""
        cut = max(len(self) - int(validation_samples), 0)
        return self.subset(slice(0, cut)), self.subset(slice(cut, None))


def _generate_range(spec: DatasetSpec, constellation: Constellation, lut: IaLut,
                    rng: SeededRng, start: int, stop: int) -> Dict[str, np.ndarray]:
    q = constellation.Q
    k = spec.channel.K
    rows = {'x': [], 'y': [], 'H': [], 'sigma_w2': [], 'llr_a': []}
    for index in range(start, stop):
        sample_rng = rng.substream('dataset', index)
        snr_db = spec.snr_db
        if spec.snr_jitter_db > 0:
            snr_db += sample_rng.substream('snr').uniform(-spec.snr_jitter_db, spec.snr_jitter_db)

        H = generate_channel(spec.channel, sample_rng.substream('channel'))
        bits = sample_rng.substream('bits').integers(0, 2, size=k * q)
        x = modulate(bits, constellation)
        instance = apply_awgn(H, x, snr_db, sample_rng.substream('noise'), constellation.es)
        llr_a, _ = sample_mixed_prior_llrs(bits[None, :], lut, sample_rng.substream('llr'), spec.ia_set)

        rows['x'].append(x)
        rows['y'].append(instance.y)
        rows['H'].append(H)
        rows['sigma_w2'].append(float(instance.sigma_w2))
        rows['llr_a'].append(llr_a[0])
    return {name: np.asarray(values, dtype=np.float64) for name, values in rows.items()}


def generate_dataset(spec: DatasetSpec, constellation: Constellation, lut: IaLut,
                     rng: SeededRng, threads: int = 1, progress: bool = False) -> TrainingDataset:
    """Draw spec.n_samples labelled samples

    Chunks run on a thread pool and are reassembled in index order.
    """
    k, n, j = spec.channel.K, spec.channel.N, spec.channel.K * constellation.Q
    if spec.n_samples == 0:
        return TrainingDataset(np.zeros((0, k)), np.zeros((0, n)), np.zeros((0, n, k)),
                               np.zeros((0,)), np.zeros((0, j)), meta=spec.as_dict())

    bounds = [(start, min(start + GENERATION_CHUNK, spec.n_samples))
              for start in range(0, spec.n_samples, GENERATION_CHUNK)]
    logger.info(f"Generating {spec.n_samples} samples at {spec.snr_db} dB "
                f"in {len(bounds)} chunks on {threads} thread(s)")

    with ThreadPoolExecutor(max_workers=max(int(threads), 1)) as pool:
        futures = [pool.submit(_generate_range, spec, constellation, lut, rng, start, stop)
                   for start, stop in bounds]
        chunks = [future.result() for future in tqdm(futures, desc='dataset', disable=not progress)]

    stacked = {name: np.concatenate([chunk[name] for chunk in chunks]) for name in chunks[0]}
    return TrainingDataset(meta=spec.as_dict(), **stacked)


def save_dataset(dataset: TrainingDataset, path) -> Path:
    tensors = {'x': dataset.x, 'y': dataset.y, 'H': dataset.H,
               'sigma_w2': dataset.sigma_w2, 'llr_a': dataset.llr_a}
    if dataset.llr_e is not None:
        tensors['llr_e'] = dataset.llr_e
    path = write_tensor_file(Path(path), DATASET_MAGIC, DATASET_VERSION, dataset.meta, tensors)
    logger.info(f"Cached {len(dataset)} samples to {path}")
    return path


def load_dataset(path) -> TrainingDataset:
    meta, tensors = read_tensor_file(Path(path), DATASET_MAGIC, DATASET_VERSION)
    logger.info(f"Loaded {tensors['x'].shape[0]} samples from {path}")
    return TrainingDataset(meta=meta, **tensors)

