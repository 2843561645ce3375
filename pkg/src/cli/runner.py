"""
Experiment Runner
Orchestrates training, label generation, Monte Carlo evaluation and the
diagnostic subcommands, and writes the results CSV and run manifest.
"""

import json
import logging
import math
from dataclasses import replace
from datetime import datetime
from importlib import metadata as package_metadata
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config.experiment import ExperimentConfig
from ..config.settings import BASE_DIR, DATA_CONFIG
from ..gepnet.archive import ARCHIVE_EXTENSION, WeightArchive, deserialize, serialize
from ..gepnet.model import OutputHead, detector_llrs, gepnet_forward, masked_extrinsic_llrs
from ..gepnet.pruning import measure_retention
from ..modem.mapping import prior_pdf_from_llrs
from ..numerics.rng import SeededRng
from ..training.dataset import DATASET_EXTENSION, TrainingDataset, generate_dataset, load_dataset, save_dataset
from ..training.ia_lut import IaLut, build_ia_lut
from ..training.trainer import GepnetTrainer
from ..turbo.receiver import DetectorKind, SoftDetector, TurboReceiver
from ..turbo.scaling import LlrScaler
from ..utils.data_validation import RESULT_COLUMNS, ConfigValidator
from ..utils.exceptions import ConfigError, MissingArchiveError
from ..utils.helpers import git_revision

logger = logging.getLogger(__name__)

DATASET_PURPOSES = {'step1': 0, 'labels': 1, 'histogram': 2, 'retention': 3}
REPORTED_PACKAGES = ('numpy', 'scipy', 'pandas', 'statsmodels', 'pyyaml', 'click', 'tqdm')
RETENTION_TRIALS = 64


class ExperimentRunner:
    """One configured experiment; every subcommand is a method"""

    def __init__(self, config: ExperimentConfig, out_dir: Optional[Path] = None,
                 threads: Optional[int] = None, progress: bool = False):
        self.config = config
        self.out_dir = Path(out_dir) if out_dir else config.output_dir
        self.threads = config.threads if threads is None else int(threads)
        self.progress = progress
        self.rng = SeededRng(config.seed)
        self.constellation = config.constellation()
        self.channel_spec = config.channel_spec()
        self.started_at = datetime.now().isoformat(timespec='seconds')
        self.git_rev = git_revision(BASE_DIR)
        self._lut: Optional[IaLut] = None
        self.stats = {
            'datasets_generated': 0,
            'archives_written': 0,
            'words_simulated': 0,
            'rows_written': 0,
        }

    @property
    def lut(self) -> IaLut:
        if self._lut is None:
            self._lut = build_ia_lut(int(self.config.training['quadrature_nodes']))
        return self._lut

    def make_dataset(self, purpose: str, n_samples: int, zero_only: bool = False,
                     ia_set: Optional[Tuple[float, ...]] = None,
                     lut: Optional[IaLut] = None) -> TrainingDataset:
        spec = self.config.dataset_spec(n_samples, zero_only)
        if ia_set is not None:
            spec = replace(spec, ia_set=tuple(ia_set))
        rng = self.rng.substream('dataset', DATASET_PURPOSES[purpose])
        dataset = generate_dataset(spec, self.constellation, lut or self.lut, rng,
                                   threads=self.threads, progress=self.progress)
        self.stats['datasets_generated'] += 1
        return dataset

    def default_archive(self, name: str) -> Path:
        return Path(DATA_CONFIG['archive_path']) / f"{name}{ARCHIVE_EXTENSION}"

    def _trainer(self, head: OutputHead) -> GepnetTrainer:
        return GepnetTrainer(self.config.gepnet_config(head), self.constellation,
                             self.config.training_config(self.out_dir, self.progress),
                             self.rng.substream('weights'))

    def _write_archive(self, archive: WeightArchive, path: Path) -> Path:
        path = serialize(archive, path)
        self.stats['archives_written'] += 1
        return path

    def train_step1(self, archive_path: Optional[Path] = None, zero_only: bool = False) -> Path:
        """Train the APP model (or the I_A = 0 baseline) and save it"""
        training = self.config.training
        total = int(training['samples']) + int(training['validation_samples'])
        logger.info("Phase 1: Generate the Step-1 dataset")
        train, validation = self.make_dataset('step1', total, zero_only).split(
            int(training['validation_samples']))

        logger.info("Phase 2: Train")
        archive = self._trainer(OutputHead.APP).train_step1(train, validation)
        archive.metadata['ia0'] = bool(zero_only)
        default = self.default_archive('ia0' if zero_only else 'app')
        configured = self.config.gepnet['ia0_archive' if zero_only else 'app_archive']
        return self._write_archive(archive, archive_path or configured or default)

    def load_archive(self, path: Optional[Path], role: str) -> WeightArchive:
        if path is None:
            raise MissingArchiveError(f"No {role} archive configured")
        return deserialize(path, num_classes=self.constellation.M)

    def generate_labels(self, app_archive: Optional[Path] = None,
                        dataset_path: Optional[Path] = None) -> Path:
        """Fresh samples labelled by masked APP inferences, cached as .gepd"""
        training = self.config.training
        app = self.load_archive(app_archive or self.config.archive_path(DetectorKind.GEPNET_APP), 'APP')
        total = int(training['label_samples']) + int(training['validation_samples'])
        logger.info("Phase 1: Generate the Step-2 samples")
        dataset = self.make_dataset('labels', total)

        trainer = self._trainer(OutputHead.APP)
        trainer.gepnet_config = replace(trainer.gepnet_config, gnn=app.hyperparams)
        labelled = trainer.generate_ext_labels(app, dataset)
        path = dataset_path or (Path(DATA_CONFIG['dataset_path']) / f"ext_labels{DATASET_EXTENSION}")
        return save_dataset(labelled, path)

    def train_step3(self, labels_path: Optional[Path] = None, app_archive: Optional[Path] = None,
                    archive_path: Optional[Path] = None) -> Path:
        labels_path = labels_path or (Path(DATA_CONFIG['dataset_path']) / f"ext_labels{DATASET_EXTENSION}")
        if not Path(labels_path).exists():
            raise MissingArchiveError(f"Label dataset not found: {labels_path}")
        init = self.load_archive(app_archive or self.config.archive_path(DetectorKind.GEPNET_APP), 'APP')
        labelled = load_dataset(labels_path)
        train, validation = labelled.split(int(self.config.training['validation_samples']))

        trainer = self._trainer(OutputHead.EXT)
        trainer.gepnet_config = replace(trainer.gepnet_config, gnn=init.hyperparams)
        archive = trainer.train_step3(train, validation, init)
        archive.metadata['llr_range'] = init.metadata.get('llr_range')
        target = archive_path or self.config.gepnet['ext_archive'] or self.default_archive('ext')
        return self._write_archive(archive, target)

    def build_detector(self, kind: DetectorKind, archive_override: Optional[Path] = None
                       ) -> Tuple[SoftDetector, Optional[LlrScaler]]:
        turbo = self.config.turbo
        if not kind.learned:
            return SoftDetector(kind, self.constellation, ep_config=self.config.ep_config()), None

        path = archive_override or self.config.archive_path(kind)
        report = ConfigValidator.validate_archive_paths({kind.value: path})
        if not report['is_valid']:
            raise MissingArchiveError('; '.join(report['errors']))
        archive = deserialize(path, num_classes=self.constellation.M)
        gepnet_config = replace(self.config.gepnet_config(kind.head), gnn=archive.hyperparams)
        if archive.metadata.get('alpha') not in (None, gepnet_config.alpha):
            logger.warning(f"{kind.value} archive was trained with alpha={archive.metadata['alpha']}, "
                           f"deploying with alpha={gepnet_config.alpha}")
        detector = SoftDetector(kind, self.constellation, gepnet_config=gepnet_config,
                                params=archive.params, masked=bool(turbo['masked_verification']))
        return detector, LlrScaler.from_metadata(archive.metadata, float(turbo['coverage']))

    def evaluate(self, snr_points: Optional[Sequence[float]] = None,
                 detectors: Optional[Sequence[DetectorKind]] = None,
                 iterations: Optional[int] = None,
                 archive_override: Optional[Path] = None) -> pd.DataFrame:
        """Monte Carlo rows per (SNR, detector, turbo iteration)"""
        snr_points = tuple(self.config.snr_points if snr_points is None else snr_points)
        detectors = tuple(self.config.detectors if detectors is None else detectors)
        rows: List[Dict] = []
        for kind in detectors:
            detector, scaler = self.build_detector(kind, archive_override)
            receiver = TurboReceiver(self.channel_spec, self.constellation,
                                     self.config.turbo_config(kind, iterations), detector,
                                     scaler=scaler, csi=self.config.csi_config())
            for point, snr_db in enumerate(snr_points):
                logger.info(f"Evaluating {kind.value} at {snr_db} dB")
                counters = receiver.simulate(snr_db, self.rng.substream('point', point),
                                             threads=self.threads, progress=self.progress)
                for iteration, counter in enumerate(counters, start=1):
                    row = {'snr_db': float(snr_db), 'detector': kind.value, 'turbo_iter': iteration}
                    row.update(counter.as_dict())
                    row.update({'seed': self.config.seed, 'git_rev': self.git_rev})
                    rows.append(row)
            self.stats['words_simulated'] += receiver.stats['words']

        frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
        return frame.sort_values(['snr_db', 'detector', 'turbo_iter'], kind='mergesort').reset_index(drop=True)

    def retention(self, alphas: Iterable[float], n_trials: int = RETENTION_TRIALS,
                  snr_points: Optional[Sequence[float]] = None) -> pd.DataFrame:
        snr_points = tuple(self.config.snr_points if snr_points is None else snr_points)
        frames = []
        for point, snr_db in enumerate(snr_points):
            frame = measure_retention(self.channel_spec, self.constellation, snr_db, list(alphas),
                                      n_trials, self.rng.substream('dataset', DATASET_PURPOSES['retention'])
                                      .substream('point', point), self.config.ep_config())
            frame.insert(0, 'snr_db', float(snr_db))
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def llr_histograms(self, ia: float, n_samples: int, bins: int = 60) -> pd.DataFrame:
        """Histogram rows (source, bin_left, bin_right, count) of detector output LLRs"""
        ia = float(ia)
        if not 0.0 <= ia <= 1.0:
            raise ConfigError(f"I_A must lie in [0, 1], got {ia}")
        lut = self.lut
        if ia not in lut.ia_values:
            lut = build_ia_lut(int(self.config.training['quadrature_nodes']), ia_set=lut.ia_values + (ia,))
        dataset = self.make_dataset('histogram', n_samples, ia_set=(ia,), lut=lut)
        priors = prior_pdf_from_llrs(dataset.prior_llrs(self.constellation), self.constellation)
        instance = dataset.instance()
        sources: Dict[str, np.ndarray] = {'prior': dataset.llr_a}

        app_path = self.config.archive_path(DetectorKind.GEPNET_APP)
        if app_path is not None and Path(app_path).exists():
            app = deserialize(app_path, num_classes=self.constellation.M)
            app_config = replace(self.config.gepnet_config(OutputHead.APP), gnn=app.hyperparams)
            output = gepnet_forward(instance, priors, app.params, app_config, self.constellation)
            sources['app_minus_prior'] = detector_llrs(output, OutputHead.APP, self.constellation,
                                                prior_llrs=dataset.llr_a)
            sources['ext_label'] = masked_extrinsic_llrs(instance, dataset.llr_a, app.params, app_config,
                                                         self.constellation, head=OutputHead.APP)

        ext_path = self.config.archive_path(DetectorKind.EXT_GEPNET)
        if ext_path is not None and Path(ext_path).exists():
            ext = deserialize(ext_path, num_classes=self.constellation.M)
            ext_config = replace(self.config.gepnet_config(OutputHead.EXT), gnn=ext.hyperparams)
            output = gepnet_forward(instance, priors, ext.params, ext_config, self.constellation)
            sources['ext'] = detector_llrs(output, OutputHead.EXT, self.constellation)

        if len(sources) == 1:
            logger.warning("No GEPNet archives available; only the prior histogram is produced")
        clip = self.config.ep_config().llr_clip
        edges = np.linspace(-clip, clip, bins + 1)
        rows = []
        for name, values in sources.items():
            counts, _ = np.histogram(np.clip(values, -clip, clip), bins=edges)
            for left, right, count in zip(edges[:-1], edges[1:], counts):
                rows.append({'source': name, 'ia': float(ia), 'bin_left': float(left),
                             'bin_right': float(right), 'count': int(count)})
        return pd.DataFrame(rows)

    def write_table(self, frame: pd.DataFrame, name: Optional[str] = None) -> Path:
        path = self.out_dir / (name or self.config.output['results_file'])
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=repr_float, lineterminator='\n')
        self.stats['rows_written'] += len(frame)
        logger.info(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_results(self, frame: pd.DataFrame) -> Path:
        report = ConfigValidator.validate_results_frame(frame)
        if not report['is_valid']:
            raise ValueError(f"Results failed schema validation: {report['errors']}")
        return self.write_table(frame)

    def write_manifest(self, command: str, extra: Optional[Dict] = None) -> Path:
        manifest = {
            'command': command,
            'config': self.config.as_dict(),
            'seed': self.config.seed,
            'git_rev': self.git_rev,
            'started_at': self.started_at,
            'finished_at': datetime.now().isoformat(timespec='seconds'),
            'threads': self.threads,
            'packages': package_versions(),
            'stats': self.stats,
        }
        learned = any(kind.learned for kind in self.config.detectors)
        if command in ('evaluate', 'sweep') and self.config.gepnet['alpha'] and learned:
            retention = self.retention([float(self.config.gepnet['alpha'])], RETENTION_TRIALS)
            manifest['edge_retention'] = retention.to_dict(orient='records')
        manifest.update(extra or {})
        path = self.out_dir / self.config.output['manifest_file']
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as handle:
            json.dump(manifest, handle, sort_keys=True, indent=2, default=str)
        logger.info(f"Wrote manifest to {path}")
        return path


def repr_float(value: float) -> str:
    """Shortest round-tripping text for a float"""
    if math.isnan(value):
        return 'nan'
    return repr(float(value))


def package_versions() -> Dict[str, str]:
    versions = {}
    for name in REPORTED_PACKAGES:
        try:
            versions[name] = package_metadata.version(name)
        except package_metadata.PackageNotFoundError:
            versions[name] = 'unknown'
    return versions
