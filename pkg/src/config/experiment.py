"""
Experiment Configuration
YAML files with sections system, channel, code, detector, gepnet,
training, turbo and output. Values may be overridden from the
environment as GEPNET__<SECTION>__<KEY> (YAML-parsed) and from explicit
override dictionaries, in that order.
"""

import copy
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from ..channel.models import ChannelKind, ChannelModelSpec
from ..detection.ep import EpConfig
from ..gepnet.model import GepnetConfig, OutputHead
from ..gnn.params import GnnHyperparams
from ..modem.constellation import Constellation
from ..training.dataset import DatasetSpec
from ..training.ia_lut import IA_SET
from ..training.trainer import TrainingConfig
from ..turbo.codecs import CodeConfig
from ..turbo.receiver import CsiConfig, DetectorKind, TurboConfig, parse_detector
from ..utils.data_validation import ConfigValidator
from ..utils.exceptions import ConfigError
from .settings import APP_CONFIG, DATA_CONFIG, ENV_PREFIX, NUMERIC_CONFIG

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'system': {
        'n_r': 4, 'n_t': 4, 'modulation': 'qpsk', 'snr_db': [10.0],
        'seed': APP_CONFIG['default_seed'], 'threads': APP_CONFIG['default_threads'],
    },
    'channel': {
        'kind': 'iid_rayleigh', 'corr_coeff': 0.0, 'csi': 'perfect',
        'n_pilots': None, 'covariance_prior': 'kronecker',
    },
    'code': {
        'kind': 'cc', 'rate': '1/2', 'message_length': 128,
        'interleaver_seed': 0, 'turbo_inner_iterations': 10,
    },
    'detector': {
        'names': ['ep'], 'layers': 5, 'damping': 0.2,
    },
    'gepnet': {
        'n_u': 8, 'n_h1': 64, 'n_h2': 32, 'rounds': 2, 'alpha': 0.0,
        'pruning_mode': 'matched', 'app_archive': None, 'ext_archive': None, 'ia0_archive': None,
    },
    'training': {
        'snr_db': 10.0, 'samples': 200000, 'label_samples': 20000, 'validation_samples': 2000,
        'epochs': 300, 'batch_size': 128, 'learning_rate': 1e-3, 'ia_set': 'full',
        'snr_jitter_db': 0.0, 'quadrature_nodes': NUMERIC_CONFIG['quadrature_nodes'],
        'label_chunk': 64,
    },
    'turbo': {
        'iterations': 2, 'max_words': 2000, 'max_word_errors': 200, 'max_bits': 50000000,
        'block_words': 32, 'channel_interleaver_seed': 1, 'coverage': 0.97,
        'masked_verification': False,
    },
    'output': {
        'dir': str(DATA_CONFIG['results_path']),
        'results_file': DATA_CONFIG['results_file'],
        'manifest_file': DATA_CONFIG['manifest_file'],
    },
}


def merge_sections(base: Mapping[str, Dict], updates: Optional[Mapping[str, Dict]]) -> Dict[str, Dict]:
    merged = copy.deepcopy(dict(base))
    for section, values in (updates or {}).items():
        if not isinstance(values, Mapping):
            merged[section] = values
            continue
        merged.setdefault(section, {})
        merged[section].update(values)
    return merged


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Dict[str, Any]]:
    """Collect GEPNET__SECTION__KEY variables"""
    environ = os.environ if environ is None else environ
    prefix = f"{ENV_PREFIX}__"
    overrides: Dict[str, Dict[str, Any]] = {}
    for name, value in environ.items():
        if not name.startswith(prefix):
            continue
        parts = name[len(prefix):].lower().split('__')
        if len(parts) != 2:
            logger.warning(f"Ignoring malformed override {name}")
            continue
        section, key = parts
        overrides.setdefault(section, {})[key] = yaml.safe_load(value)
    return overrides


def load_raw_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Dict]] = None,
                    environ: Optional[Mapping[str, str]] = None) -> Dict[str, Dict]:
    """Defaults <- YAML file <- environment <- explicit overrides"""
    raw: Dict = {}
    if path is not None:
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text()) or {}
        except FileNotFoundError as e:
            raise ConfigError(f"Config file not found: {path}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"Could not parse {path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"{path} must hold a mapping of sections")

    unknown = sorted(set(raw) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"Unknown config sections: {unknown}")
    merged = merge_sections(DEFAULTS, raw)
    merged = merge_sections(merged, env_overrides(environ))
    return merge_sections(merged, overrides)


@dataclass(frozen=True)
class ExperimentConfig:
    system: Dict[str, Any]
    channel: Dict[str, Any]
    code: Dict[str, Any]
    detector: Dict[str, Any]
    gepnet: Dict[str, Any]
    training: Dict[str, Any]
    turbo: Dict[str, Any]
    output: Dict[str, Any]

    @property
    def seed(self) -> int:
        return int(self.system['seed'])

    @property
    def threads(self) -> int:
        return int(self.system['threads'])

    @property
    def snr_points(self) -> Tuple[float, ...]:
        values = self.system['snr_db']
        values = values if isinstance(values, (list, tuple)) else [values]
        return tuple(float(v) for v in values)

    @property
    def detectors(self) -> Tuple[DetectorKind, ...]:
        names = self.detector['names']
        names = names if isinstance(names, (list, tuple)) else [names]
        return tuple(parse_detector(name) for name in names)

    @property
    def output_dir(self) -> Path:
        return Path(self.output['dir'])

    def constellation(self) -> Constellation:
        return Constellation.from_name(self.system['modulation'])

    def channel_spec(self) -> ChannelModelSpec:
        return ChannelModelSpec(
            n_r=int(self.system['n_r']), n_t=int(self.system['n_t']),
            kind=ChannelKind(self.channel['kind']), corr_coeff=float(self.channel['corr_coeff']),
        )

    def csi_config(self) -> CsiConfig:
        return CsiConfig(mode=self.channel['csi'], n_pilots=self.channel['n_pilots'],
                         covariance_prior=self.channel['covariance_prior'])

    def ep_config(self) -> EpConfig:
        return EpConfig(layers=int(self.detector['layers']), damping=float(self.detector['damping']))

    def gepnet_config(self, head: OutputHead = OutputHead.EXT) -> GepnetConfig:
        g = self.gepnet
        hyperparams = GnnHyperparams(n_u=int(g['n_u']), n_h1=int(g['n_h1']),
                                     n_h2=int(g['n_h2']), rounds=int(g['rounds']))
        return GepnetConfig(ep=self.ep_config(), gnn=hyperparams, alpha=float(g['alpha']),
                            head=head, pruning_mode=g['pruning_mode'])

    def archive_path(self, detector: DetectorKind) -> Optional[Path]:
        key = {
            DetectorKind.GEPNET_APP: 'app_archive',
            DetectorKind.GEPNET_IA0: 'ia0_archive',
            DetectorKind.EXT_GEPNET: 'ext_archive',
        }.get(detector)
        value = self.gepnet.get(key) if key else None
        return Path(value) if value else None

    def code_config(self) -> CodeConfig:
        c = self.code
        return CodeConfig(kind=c['kind'], message_length=int(c['message_length']), rate=str(c['rate']),
                          interleaver_seed=c['interleaver_seed'],
                          turbo_inner_iterations=int(c['turbo_inner_iterations']))

    def turbo_config(self, detector: DetectorKind, iterations: Optional[int] = None) -> TurboConfig:
        t = self.turbo
        return TurboConfig(
            iterations=int(t['iterations'] if iterations is None else iterations),
            detector=detector, code=self.code_config(),
            channel_interleaver_seed=t['channel_interleaver_seed'], coverage=float(t['coverage']),
            max_word_errors=t['max_word_errors'], max_bits=t['max_bits'],
            max_words=int(t['max_words']), block_words=int(t['block_words']),
            masked_verification=bool(t['masked_verification']),
        )

    def ia_set(self, zero_only: bool = False) -> Tuple[float, ...]:
        if zero_only or self.training['ia_set'] == 'zero':
            return (0.0,)
        if self.training['ia_set'] == 'full':
            return IA_SET
        return tuple(float(v) for v in self.training['ia_set'])

    def dataset_spec(self, n_samples: int, zero_only: bool = False) -> DatasetSpec:
        return DatasetSpec(channel=self.channel_spec(), modulation=self.system['modulation'],
                           snr_db=float(self.training['snr_db']), n_samples=int(n_samples),
                           ia_set=self.ia_set(zero_only),
                           snr_jitter_db=float(self.training['snr_jitter_db']))

    def training_config(self, checkpoint_dir: Optional[Path] = None, progress: bool = False) -> TrainingConfig:
        t = self.training
        return TrainingConfig(epochs=int(t['epochs']), batch_size=int(t['batch_size']),
                              learning_rate=float(t['learning_rate']),
                              validation_samples=int(t['validation_samples']),
                              label_chunk=int(t['label_chunk']),
                              checkpoint_dir=str(checkpoint_dir) if checkpoint_dir else None,
                              progress=progress)

    def as_dict(self) -> Dict[str, Dict]:
        return {name: copy.deepcopy(getattr(self, name)) for name in DEFAULTS}


def build_experiment_config(raw: Mapping[str, Dict]) -> ExperimentConfig:
    report = ConfigValidator.validate_experiment(raw, DEFAULTS)
    for warning in report['warnings']:
        logger.warning(warning)
    if not report['is_valid']:
        raise ConfigError('; '.join(report['errors']))
    try:
        config = ExperimentConfig(**{name: dict(raw[name]) for name in DEFAULTS})
        config.channel_spec()
        config.constellation()
        config.gepnet_config()
        config.csi_config()
        for detector in config.detectors:
            config.turbo_config(detector)
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigError(f"Invalid experiment configuration: {e}") from e
    return config


def load_experiment_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Dict]] = None,
                           environ: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    config = build_experiment_config(load_raw_config(path, overrides, environ))
    logger.info(f"Loaded experiment config from {path or 'defaults'}")
    return config
