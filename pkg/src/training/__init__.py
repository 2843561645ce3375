"""
Training Package
I_A lookup, synthetic datasets, losses and the three-step trainer.
"""

from .dataset import (DATASET_EXTENSION, DatasetSpec, TrainingDataset, generate_dataset,
                      load_dataset, save_dataset)
from .ia_lut import IA_SET, IaLut, build_ia_lut, j_function, sample_mixed_prior_llrs, sample_prior_llrs
from .losses import binary_entropy, loss_app, loss_app_with_grad, loss_ext, loss_ext_with_grad
from .trainer import GepnetTrainer, TrainingConfig

__all__ = [
    'DATASET_EXTENSION', 'DatasetSpec', 'TrainingDataset', 'generate_dataset',
    'load_dataset', 'save_dataset',
    'IA_SET', 'IaLut', 'build_ia_lut', 'j_function', 'sample_mixed_prior_llrs', 'sample_prior_llrs',
    'binary_entropy', 'loss_app', 'loss_app_with_grad', 'loss_ext', 'loss_ext_with_grad',
    'GepnetTrainer', 'TrainingConfig',
]
