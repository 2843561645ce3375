"""Tests for general helpers and the exception hierarchy"""

import logging
import math

import numpy as np
import pandas as pd
import pytest

from src.utils import exceptions
from src.utils.data_validation import RESULT_COLUMNS, ConfigValidator
from src.utils.helpers import bits_to_int, db_to_linear, format_number, int_to_bits, linear_to_db
from src.utils.logging_config import setup_logging


class TestHelpers:
    def test_db_conversions(self):
        assert db_to_linear(10.0) == pytest.approx(10.0)
        assert db_to_linear(math.inf) == math.inf
        assert linear_to_db(100.0) == pytest.approx(20.0)
        assert linear_to_db(0.0) == -math.inf

    def test_bits(self):
        bits = int_to_bits(np.array([0, 5, 6]), 3)
        np.testing.assert_array_equal(bits, [[0, 0, 0], [1, 0, 1], [1, 1, 0]])
        np.testing.assert_array_equal(bits_to_int(bits), [0, 5, 6])

    def test_format_number(self):
        assert format_number(0.00123) == '1.230e-03'
        assert format_number(float('nan')) == 'N/A'
        assert format_number(None) == 'N/A'


class TestExceptions:
    @pytest.mark.parametrize('error,builtin', [
        (exceptions.ConfigError, ValueError),
        (exceptions.MissingArchiveError, FileNotFoundError),
        (exceptions.NumericalDomain, ArithmeticError),
        (exceptions.ArchiveChecksumError, exceptions.ArchiveError),
        (exceptions.UnknownAlgorithm, ValueError),
    ])
    def test_hierarchy(self, error, builtin):
        assert issubclass(error, exceptions.GepnetLabError)
        assert issubclass(error, builtin)

    def test_messages(self):
        assert exceptions.NotPositiveDefinite(2).pivot == 2
        error = exceptions.ArchiveShapeError('read_w3', (4, 32), (2, 32))
        assert 'read_w3' in str(error)
        assert 'snap.gepw' in str(exceptions.TrainingDivergedError('nan loss', 'snap.gepw'))


class TestResultsValidation:
    def frame(self, **changes):
        row = {'snr_db': 4.0, 'detector': 'ep', 'turbo_iter': 1, 'ser': 0.1, 'ber': 0.05, 'wer': 0.5,
               'n_bits': 100, 'n_errors': 5, 'stderr_est': 0.02, 'seed': 1, 'git_rev': 'abc'}
        row.update(changes)
        return pd.DataFrame([row], columns=RESULT_COLUMNS)

    def test_valid(self):
        report = ConfigValidator.validate_results_frame(self.frame())
        assert report['is_valid']
        assert report['summary']['total_rows'] == 1

    @pytest.mark.parametrize('changes', [{'ber': 1.5}, {'n_errors': 500}, {'turbo_iter': 0}])
    def test_invalid(self, changes):
        assert not ConfigValidator.validate_results_frame(self.frame(**changes))['is_valid']

    def test_columns(self):
        report = ConfigValidator.validate_results_frame(self.frame().drop(columns=['git_rev']))
        assert not report['is_valid']

    def test_archive_paths(self, tmp_path):
        present = tmp_path / 'a.gepw'
        present.write_bytes(b'')
        report = ConfigValidator.validate_archive_paths({'app': present, 'ext': None})
        assert not report['is_valid']
        assert report['summary']['missing'] == 1


class TestLogging:
    def test_log_file_override(self, tmp_path):
        target = tmp_path / 'nested' / 'run.log'
        setup_logging(verbose=True, log_file=target)
        logging.getLogger('src.test').debug('debug line')
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert logging.getLogger().level == logging.DEBUG
        assert 'debug line' not in target.read_text()
        logging.getLogger('src.test').info('info line')
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert 'info line' in target.read_text()
