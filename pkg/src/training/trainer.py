"""
GEPNet Three-Step Trainer
Step 1 trains the APP head with L1, Step 2 labels fresh samples with
masked inferences of the APP model, Step 3 trains the EXT head with L2
starting from the Step-1 weights.
"""

import logging
import math
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..config.settings import DATA_CONFIG
from ..gepnet.archive import ARCHIVE_EXTENSION, WeightArchive, serialize
from ..gepnet.heads import bit_llrs_backward, bit_llrs_from_logits
from ..gepnet.model import GepnetConfig, OutputHead, gepnet_forward, masked_extrinsic_llrs
from ..gnn.network import backward
from ..gnn.optimizer import AdamState, adam_step
from ..gnn.params import GnnParameters, glorot_init
from ..modem.constellation import Constellation
from ..modem.mapping import log_prior_from_llrs, prior_pdf_from_llrs
from ..numerics.rng import SeededRng
from ..utils.exceptions import TrainingDivergedError
from .dataset import TrainingDataset
from .losses import loss_app_with_grad, loss_ext, loss_ext_with_grad

logger = logging.getLogger(__name__)

LLR_RANGE_COVERAGE = 0.97


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 300
    batch_size: int = 128
    learning_rate: float = 1e-3
    validation_samples: int = 2000
    label_chunk: int = 64
    checkpoint_dir: Optional[str] = None
    progress: bool = False

    def __post_init__(self):
        if self.epochs < 0 or self.batch_size < 1 or self.label_chunk < 1:
            raise ValueError("epochs must be >= 0, batch_size and label_chunk >= 1")
        if self.learning_rate <= 0:
            raise ValueError(f"Learning rate must be positive, got {self.learning_rate}")


class GepnetTrainer:
    """Runs the training steps and keeps per-run statistics"""

    def __init__(self, gepnet_config: GepnetConfig, constellation: Constellation,
                 training_config: TrainingConfig, rng: SeededRng):
        self.gepnet_config = gepnet_config
        self.constellation = constellation
        self.config = training_config
        self.rng = rng
        self.history: List[Dict[str, float]] = []
        self.stats = {
            'epochs_run': 0,
            'optimizer_steps': 0,
            'best_epoch': -1,
            'best_validation_loss': math.inf,
            'initial_training_loss': math.nan,
            'final_training_loss': math.nan,
        }

    def initial_parameters(self) -> GnnParameters:
        return glorot_init(self.gepnet_config.gnn, self.constellation.M, self.rng.substream('weights'))

    def _forward(self, params: GnnParameters, batch: TrainingDataset, record_tape: bool):
        priors = prior_pdf_from_llrs(batch.prior_llrs(self.constellation), self.constellation)
        return gepnet_forward(batch.instance(), priors, params, self.gepnet_config, self.constellation,
                              alpha=self.gepnet_config.training_alpha, record_tape=record_tape)

    def batch_loss_and_grads(self, params: GnnParameters, batch: TrainingDataset,
                             head: OutputHead) -> Tuple[float, GnnParameters]:
        """Loss on the last layer's readout and its gradient w.r.t. every tensor"""
        output = self._forward(params, batch, record_tape=True)
        logits = output.logits_final
        if head == OutputHead.APP:
            log_prior = log_prior_from_llrs(batch.prior_llrs(self.constellation), self.constellation)
            loss, dlogits = loss_app_with_grad(logits, log_prior, batch.symbol_labels(self.constellation))
        else:
            model_llrs = bit_llrs_from_logits(logits, self.constellation)
            loss, dllrs = loss_ext_with_grad(model_llrs.reshape(len(batch), -1), batch.llr_e)
            dlogits = bit_llrs_backward(dllrs.reshape(model_llrs.shape), logits, self.constellation)

        dlogits_layers = [None] * (len(output.logits) - 1) + [dlogits]
        return loss, backward(output.tape, params, dlogits_layers)

    def batch_loss(self, params: GnnParameters, batch: TrainingDataset, head: OutputHead) -> float:
        output = self._forward(params, batch, record_tape=False)
        logits = output.logits_final
        if head == OutputHead.APP:
            log_prior = log_prior_from_llrs(batch.prior_llrs(self.constellation), self.constellation)
            loss, _ = loss_app_with_grad(logits, log_prior, batch.symbol_labels(self.constellation))
            return loss
        model_llrs = bit_llrs_from_logits(logits, self.constellation).reshape(len(batch), -1)
        return loss_ext(model_llrs, batch.llr_e)

    def evaluate(self, params: GnnParameters, dataset: TrainingDataset, head: OutputHead) -> float:
        """Per-sample mean loss over the whole dataset"""
        if len(dataset) == 0:
            return math.nan
        size = self.config.batch_size
        total = 0.0
        for start in range(0, len(dataset), size):
            batch = dataset.subset(slice(start, start + size))
            total += self.batch_loss(params, batch, head) * len(batch)
        return total / len(dataset)

    def _snapshot(self, params: GnnParameters, head: OutputHead, epoch: int) -> Path:
        directory = Path(self.config.checkpoint_dir or DATA_CONFIG['archive_path'])
        path = directory / f"diverged_{head.value}_epoch{epoch}{ARCHIVE_EXTENSION}"
        return serialize(WeightArchive(params, {'diverged_epoch': epoch, 'head': head.value}), path)

    def fit(self, train: TrainingDataset, validation: TrainingDataset, head: OutputHead,
            init: GnnParameters) -> Tuple[GnnParameters, Dict]:
        """Adam over shuffled minibatches, keeping the best-validation weights"""
        head = OutputHead(head)
        cfg = self.config
        start_time = datetime.now()
        self.history = []
        self.stats.update(epochs_run=0, optimizer_steps=0, best_epoch=-1,
                          best_validation_loss=math.inf)
        if cfg.epochs == 0 or len(train) == 0:
            logger.info("No epochs to run; returning the initialization")
            return init, dict(self.stats)

        self.stats['initial_training_loss'] = self.evaluate(init, train, head)
        scored = validation if len(validation) else train
        best_params = init
        best_loss = self.evaluate(init, scored, head)
        self.stats.update(best_epoch=0, best_validation_loss=best_loss)

        params = init
        adam = AdamState()
        for epoch in tqdm(range(1, cfg.epochs + 1), desc=f'train-{head.value}', disable=not cfg.progress):
            order = self.rng.substream('batches', epoch).permutation(len(train))
            running = 0.0
            for start in range(0, len(train), cfg.batch_size):
                batch = train.subset(order[start:start + cfg.batch_size])
                loss, grads = self.batch_loss_and_grads(params, batch, head)
                if not math.isfinite(loss) or not grads.all_finite():
                    snapshot = self._snapshot(params, head, epoch)
                    logger.error(f"Training diverged at epoch {epoch}; snapshot at {snapshot}")
                    raise TrainingDivergedError(f"Non-finite loss at epoch {epoch}", str(snapshot))
                params = adam_step(params, grads, adam, lr=cfg.learning_rate)
                running += loss * len(batch)
                self.stats['optimizer_steps'] += 1

            train_loss = running / len(train)
            validation_loss = self.evaluate(params, scored, head)
            self.history.append({'epoch': epoch, 'train_loss': train_loss,
                                 'validation_loss': validation_loss})
            if validation_loss < best_loss:
                best_loss, best_params = validation_loss, params
                self.stats.update(best_epoch=epoch, best_validation_loss=best_loss)
            self.stats['epochs_run'] = epoch
            logger.debug(f"Epoch {epoch}: train {train_loss:.6f}, validation {validation_loss:.6f}")

        self.stats['final_training_loss'] = self.evaluate(params, train, head)
        duration = (datetime.now() - start_time).total_seconds()
        logger.info(f"Training ({head.value}) finished in {duration:.2f} seconds")
        logger.info(f"Stats: {self.stats}")
        return best_params, dict(self.stats)

    def _archive(self, params: GnnParameters, head: OutputHead, step: int,
                 dataset: TrainingDataset, stats: Dict) -> WeightArchive:
        metadata = {
            'step': step,
            'head': head.value,
            'alpha': self.gepnet_config.alpha,
            'pruning_mode': self.gepnet_config.pruning_mode.value,
            'layers': self.gepnet_config.ep.layers,
            'damping': self.gepnet_config.ep.damping,
            'seed': self.rng.seed,
            'snr_train_db': dataset.meta.get('snr_db'),
            'ia_set': dataset.meta.get('ia_set'),
            'epochs': self.config.epochs,
            'batch_size': self.config.batch_size,
            'learning_rate': self.config.learning_rate,
            'llr_range': float(np.quantile(np.abs(dataset.llr_a), LLR_RANGE_COVERAGE)) if len(dataset) else None,
        }
        metadata.update({key: stats[key] for key in ('epochs_run', 'best_epoch')})
        best = stats['best_validation_loss']
        metadata['best_validation_loss'] = best if math.isfinite(best) else None
        return WeightArchive(params, metadata)

    def train_step1(self, train: TrainingDataset, validation: TrainingDataset,
                    init: Optional[GnnParameters] = None) -> WeightArchive:
        """APP-head training with L1"""
        logger.info("Phase 1: Train the APP model")
        init = self.initial_parameters() if init is None else init
        params, stats = self.fit(train, validation, OutputHead.APP, init)
        return self._archive(params, OutputHead.APP, 1, train, stats)

    def generate_ext_labels(self, app_archive: WeightArchive, dataset: TrainingDataset) -> TrainingDataset:
        """Label L_E1(c_j) from J masked APP inferences per sample"""
        logger.info(f"Phase 2: Generate extrinsic labels for {len(dataset)} samples")
        app_config = replace(self.gepnet_config, head=OutputHead.APP)
        chunk = self.config.label_chunk
        labels = []
        for start in tqdm(range(0, len(dataset), chunk), desc='labels', disable=not self.config.progress):
            part = dataset.subset(slice(start, start + chunk))
            labels.append(masked_extrinsic_llrs(
                part.instance(), part.llr_a, app_archive.params, app_config, self.constellation,
                head=OutputHead.APP, alpha=app_config.training_alpha))
        llr_e = np.concatenate(labels) if labels else np.zeros_like(dataset.llr_a)
        return dataset.with_labels(llr_e)

    def train_step3(self, train: TrainingDataset, validation: TrainingDataset,
                    init_archive: Optional[WeightArchive] = None) -> WeightArchive:
        """EXT-head training with L2, warm-started from the APP weights"""
        logger.info("Phase 3: Train the EXT model")
        if not train.has_labels or (len(validation) and not validation.has_labels):
            raise ValueError("Step 3 needs extrinsic labels; run label generation first")
        init = self.initial_parameters() if init_archive is None else init_archive.params
        params, stats = self.fit(train, validation, OutputHead.EXT, init)
        return self._archive(params, OutputHead.EXT, 3, train, stats)
