"""Tests for the command-line interface"""

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from src.cli.main import EXIT_CONFIG, EXIT_MISSING_ARCHIVE, cli
from src.utils.data_validation import RESULT_COLUMNS


@pytest.fixture
def tiny_config(tmp_path):
    sections = {
        'system': {'n_r': 2, 'n_t': 2, 'modulation': 'qpsk', 'snr_db': [0.0, 4.0, 8.0],
                   'seed': 3, 'threads': 1},
        'code': {'kind': 'cc', 'message_length': 16},
        'detector': {'names': ['ep', 'lmmse'], 'layers': 3},
        'turbo': {'iterations': 2, 'max_words': 6, 'block_words': 3},
    }
    path = tmp_path / 'tiny.yaml'
    path.write_text(yaml.safe_dump(sections))
    return path


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


class TestCli:
    def test_complexity(self):
        result = invoke('complexity', '--algorithm', 'ep')
        assert result.exit_code == 0
        assert '9008' in result.output

    def test_complexity_table(self, tmp_path):
        result = invoke('--out-dir', str(tmp_path), 'complexity', '--table', '--etas', '1,0.5')
        assert result.exit_code == 0
        frame = pd.read_csv(tmp_path / 'complexity.csv')
        assert len(frame) == 5

    def test_unknown_algorithm_is_a_failure(self):
        assert invoke('complexity', '--algorithm', 'sphere').exit_code == 1

    def test_missing_config(self, tmp_path):
        result = invoke('--config', str(tmp_path / 'absent.yaml'), 'evaluate')
        assert result.exit_code == EXIT_CONFIG

    def test_missing_archive(self, tmp_path):
        path = tmp_path / 'learned.yaml'
        path.write_text(yaml.safe_dump({
            'system': {'n_r': 2, 'n_t': 2},
            'detector': {'names': ['ext_gepnet']},
        }))
        result = invoke('--config', str(path), '--out-dir', str(tmp_path), 'evaluate')
        assert result.exit_code == EXIT_MISSING_ARCHIVE

    def test_evaluate_writes_results(self, tiny_config, tmp_path):
        out = tmp_path / 'out'
        result = invoke('--config', str(tiny_config), '--out-dir', str(out), 'evaluate', '--snr', '4')
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out / 'results.csv')
        assert list(frame.columns) == RESULT_COLUMNS
        assert len(frame) == 4
        assert set(frame['detector']) == {'ep', 'lmmse'}
        assert (frame['snr_db'] == 4.0).all()
        assert (out / 'manifest.json').exists()

    def test_results_are_reproducible(self, tiny_config, tmp_path):
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert invoke('--config', str(tiny_config), '--out-dir', str(first), 'evaluate').exit_code == 0
        assert invoke('--config', str(tiny_config), '--out-dir', str(second), '--threads', '3',
                      'evaluate').exit_code == 0
        assert (first / 'results.csv').read_bytes() == (second / 'results.csv').read_bytes()

    def test_sweep(self, tiny_config, tmp_path):
        result = invoke('--config', str(tiny_config), '--out-dir', str(tmp_path), 'sweep')
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'results.csv')
        assert frame.groupby(['detector', 'turbo_iter']).size().eq(3).all()
        assert len(frame) == 12

    def test_retention(self, tiny_config, tmp_path):
        result = invoke('--config', str(tiny_config), '--out-dir', str(tmp_path),
                        'retention', '--alphas', '0,2', '--trials', '4')
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'retention.csv')
        assert set(frame['alpha']) == {0.0, 2.0}
        assert (frame.loc[frame['alpha'] == 0.0, 'retention'] == 1.0).all()

    def test_llr_histogram_without_archives(self, tiny_config, tmp_path):
        result = invoke('--config', str(tiny_config), '--out-dir', str(tmp_path),
                        'llr-hist', '--ia', '0.5', '--samples', '10', '--bins', '8')
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'llr_hist_ia0.5.csv')
        assert set(frame['source']) == {'prior'}
        assert frame['count'].sum() == 40

    def test_llr_histogram_default_information(self, tiny_config, tmp_path):
        result = invoke('--config', str(tiny_config), '--out-dir', str(tmp_path),
                        'llr-hist', '--samples', '10', '--bins', '8')
        assert result.exit_code == 0, result.output
        assert (tmp_path / 'llr_hist_ia0.5.csv').exists()

    @pytest.mark.parametrize('ia', ['-0.1', '1.5'])
    def test_llr_histogram_rejects_information_outside_the_unit_interval(self, tiny_config, tmp_path, ia):
        result = invoke('--config', str(tiny_config), '--out-dir', str(tmp_path),
                        'llr-hist', f'--ia={ia}', '--samples', '10')
        assert result.exit_code == EXIT_CONFIG
