"""
Configuration and Results Validation Utilities
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional

import pandas as pd

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['snr_db', 'detector', 'turbo_iter', 'ser', 'ber', 'wer',
                  'n_bits', 'n_errors', 'stderr_est', 'seed', 'git_rev']

MODULATIONS = ('qpsk', '4qam', '16qam', '64qam', '256qam')
CHANNEL_KINDS = ('iid_rayleigh', 'kronecker')
CODE_KINDS = ('cc', 'turbo', 'uncoded')
DETECTORS = ('ep', 'gepnet_app', 'gepnet_ia0', 'ext_gepnet', 'lmmse', 'map')


def _new_result() -> Dict[str, Any]:
    return {'is_valid': True, 'errors': [], 'warnings': [], 'summary': {}}


def _fail(result: Dict[str, Any], message: str) -> None:
    result['is_valid'] = False
    result['errors'].append(message)


class ConfigValidator:
    """Validation of experiment settings, archive references and result tables"""

    @staticmethod
    def validate_experiment(raw: Mapping[str, Mapping[str, Any]],
                            known_keys: Optional[Mapping[str, Iterable[str]]] = None) -> Dict[str, Any]:
        """Structural and range checks on a merged raw configuration"""
        result = _new_result()
        for section, values in raw.items():
            if not isinstance(values, Mapping):
                _fail(result, f"Section '{section}' must be a mapping")
        if not result['is_valid']:
            return result

        for section, values in (raw.items() if known_keys is not None else ()):
            unknown = sorted(set(values) - set(known_keys.get(section, ())))
            if unknown:
                _fail(result, f"Unknown keys in '{section}': {unknown}")

        system = raw.get('system', {})
        if system.get('modulation') not in MODULATIONS:
            _fail(result, f"Unsupported modulation: {system.get('modulation')}")
        try:
            n_r, n_t = int(system.get('n_r')), int(system.get('n_t'))
            if n_t < 1 or n_r < n_t:
                _fail(result, f"Need n_r >= n_t >= 1, got n_r={n_r}, n_t={n_t}")
        except (TypeError, ValueError):
            _fail(result, "Antenna counts must be integers")

        snrs = system.get('snr_db')
        snrs = snrs if isinstance(snrs, (list, tuple)) else [snrs]
        try:
            snr_values = [float(v) for v in snrs]
            if not snr_values:
                _fail(result, "SNR list must not be empty")
            elif any(math.isnan(v) for v in snr_values):
                _fail(result, "SNR values must be numbers")
        except (TypeError, ValueError):
            _fail(result, f"SNR list must be numeric: {snrs}")
            snr_values = []

        channel = raw.get('channel', {})
        if channel.get('kind') not in CHANNEL_KINDS:
            _fail(result, f"Unknown channel kind: {channel.get('kind')}")
        corr = channel.get('corr_coeff', 0.0)
        if not isinstance(corr, (int, float)) or not 0.0 <= corr < 1.0:
            _fail(result, f"Correlation coefficient must lie in [0, 1): {corr}")
        if channel.get('csi') not in ('perfect', 'estimated'):
            _fail(result, f"Unknown CSI mode: {channel.get('csi')}")

        code = raw.get('code', {})
        if code.get('kind') not in CODE_KINDS:
            _fail(result, f"Unknown code kind: {code.get('kind')}")
        if code.get('kind') == 'cc' and str(code.get('rate')) not in ('1/2', '5/6'):
            _fail(result, f"Unsupported code rate: {code.get('rate')}")

        names = raw.get('detector', {}).get('names', [])
        names = names if isinstance(names, (list, tuple)) else [names]
        unknown_detectors = [n for n in names if str(n).lower() not in DETECTORS]
        if unknown_detectors:
            _fail(result, f"Unknown detectors: {unknown_detectors}")
        if not names:
            _fail(result, "At least one detector must be selected")

        gepnet = raw.get('gepnet', {})
        alpha = gepnet.get('alpha', 0.0)
        if not isinstance(alpha, (int, float)) or alpha < 0:
            _fail(result, f"Pruning factor must be non-negative: {alpha}")
        if gepnet.get('pruning_mode') not in ('matched', 'post_hoc'):
            _fail(result, f"Unknown pruning mode: {gepnet.get('pruning_mode')}")

        turbo = raw.get('turbo', {})
        if not isinstance(turbo.get('iterations'), int) or turbo.get('iterations') < 1:
            _fail(result, f"Turbo iterations must be a positive integer: {turbo.get('iterations')}")
        if code.get('kind') == 'uncoded' and turbo.get('iterations', 1) > 1:
            result['warnings'].append("Uncoded mode ignores turbo iterations beyond the first")

        training = raw.get('training', {})
        ia_set = training.get('ia_set')
        if isinstance(ia_set, str) and ia_set not in ('full', 'zero'):
            _fail(result, f"training.ia_set must be 'full', 'zero' or a list: {ia_set}")
        if training.get('epochs', 0) and training.get('samples', 0) < training.get('batch_size', 1):
            result['warnings'].append("Training set is smaller than one batch")

        result['summary'] = {
            'snr_points': len(snr_values),
            'detectors': len(names),
            'errors': len(result['errors']),
            'warnings': len(result['warnings']),
        }
        return result

    @staticmethod
    def validate_archive_paths(paths: Mapping[str, Any]) -> Dict[str, Any]:
        """Every referenced archive must exist on disk"""
        result = _new_result()
        missing = [f"{name}: {path}" for name, path in paths.items()
                   if path is None or not Path(path).exists()]
        if missing:
            _fail(result, f"Missing weight archives: {missing}")
        result['summary'] = {'archives': len(paths), 'missing': len(missing)}
        return result

    @staticmethod
    def validate_results_frame(df: pd.DataFrame) -> Dict[str, Any]:
        """Schema and range checks on a results table"""
        result = _new_result()
        if list(df.columns) != RESULT_COLUMNS:
            _fail(result, f"Columns {list(df.columns)} do not match {RESULT_COLUMNS}")
            return result

        for column in ('ser', 'ber', 'wer'):
            rates = pd.to_numeric(df[column], errors='coerce').dropna()
            if ((rates < 0) | (rates > 1)).any():
                _fail(result, f"Column '{column}' has values outside [0, 1]")
        if (df['n_errors'] > df['n_bits']).any():
            _fail(result, "Bit error counts exceed bit counts")
        if (df['turbo_iter'] < 1).any():
            _fail(result, "Turbo iteration indices start at 1")

        result['summary'] = {
            'total_rows': len(df),
            'detectors': df['detector'].nunique(),
            'snr_points': df['snr_db'].nunique(),
        }
        return result
