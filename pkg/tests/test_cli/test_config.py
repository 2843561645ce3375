"""Tests for experiment configuration loading"""

import pytest
import yaml

from src.config.experiment import DEFAULTS, env_overrides, load_experiment_config
from src.turbo.receiver import DetectorKind
from src.utils.exceptions import ConfigError


def write_config(path, sections):
    path.write_text(yaml.safe_dump(sections))
    return path


class TestExperimentConfig:
    def test_defaults(self):
        config = load_experiment_config(environ={})
        assert config.seed == DEFAULTS['system']['seed']
        assert config.detectors == (DetectorKind.EP,)
        assert config.channel_spec().K == 8

    def test_file_values(self, tmp_path):
        path = write_config(tmp_path / 'exp.yaml', {
            'system': {'n_r': 2, 'n_t': 2, 'modulation': '16qam', 'snr_db': [1, 2]},
            'detector': {'names': ['ep', 'map']},
        })
        config = load_experiment_config(path, environ={})
        assert config.snr_points == (1.0, 2.0)
        assert config.detectors == (DetectorKind.EP, DetectorKind.MAP)
        assert config.constellation().M == 4

    def test_environment_then_overrides(self, tmp_path):
        path = write_config(tmp_path / 'exp.yaml', {'system': {'seed': 5}})
        environ = {'GEPNET__SYSTEM__SEED': '11', 'GEPNET__TURBO__MAX_WORDS': '7', 'OTHER': 'x'}
        config = load_experiment_config(path, environ=environ)
        assert config.seed == 11
        assert config.turbo['max_words'] == 7
        config = load_experiment_config(path, overrides={'system': {'seed': 13}}, environ=environ)
        assert config.seed == 13

    def test_malformed_environment_name_is_ignored(self):
        assert env_overrides({'GEPNET__SEED': '1'}) == {}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment_config(tmp_path / 'absent.yaml', environ={})

    def test_unknown_section(self, tmp_path):
        path = write_config(tmp_path / 'exp.yaml', {'decoder': {'kind': 'cc'}})
        with pytest.raises(ConfigError):
            load_experiment_config(path, environ={})

    def test_unknown_key(self, tmp_path):
        path = write_config(tmp_path / 'exp.yaml', {'system': {'antennas': 4}})
        with pytest.raises(ConfigError, match='antennas'):
            load_experiment_config(path, environ={})

    @pytest.mark.parametrize('overrides', [
        {'detector': {'names': ['sphere']}},
        {'system': {'n_r': 2, 'n_t': 4}},
        {'system': {'modulation': '8psk'}},
        {'channel': {'corr_coeff': 1.0}},
        {'code': {'rate': '2/3'}},
        {'turbo': {'iterations': 0}},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            load_experiment_config(overrides=overrides, environ={})

    def test_archive_paths(self, tmp_path):
        config = load_experiment_config(overrides={'gepnet': {'ext_archive': str(tmp_path / 'ext.gepw')}},
                                        environ={})
        assert config.archive_path(DetectorKind.EXT_GEPNET) == tmp_path / 'ext.gepw'
        assert config.archive_path(DetectorKind.GEPNET_APP) is None
        assert config.archive_path(DetectorKind.EP) is None
