"""Tests for the convolutional code and its BCJR decoder"""

import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import logsumexp

from src.coding.bcjr import bcjr_decode
from src.coding.convolutional import ConvCodeSpec, cc_encode, depuncture
from src.utils.exceptions import InvalidLength


def exhaustive_app(spec, n_message, channel_llrs):
    """Bitwise APP LLRs by enumerating every message"""
    messages = np.array(list(itertools.product([0, 1], repeat=n_message)), dtype=np.int8)
    codewords = np.array([cc_encode(m, spec) for m in messages], dtype=np.float64)
    log_weights = codewords @ channel_llrs
    message_app = np.array([
        logsumexp(log_weights[messages[:, i] == 1]) - logsumexp(log_weights[messages[:, i] == 0])
        for i in range(n_message)
    ])
    coded_app = np.array([
        logsumexp(log_weights[codewords[:, j] == 1]) - logsumexp(log_weights[codewords[:, j] == 0])
        for j in range(codewords.shape[1])
    ])
    return message_app, coded_app


class TestEncoder:
    def test_lengths(self):
        half = ConvCodeSpec.for_rate('1/2')
        assert cc_encode(np.zeros(10, dtype=np.int8), half).size == 32
        five_sixths = ConvCodeSpec.for_rate('5/6')
        assert five_sixths.coded_length(24) == 36
        assert cc_encode(np.ones(24, dtype=np.int8), five_sixths).size == 36

    def test_linearity(self):
        spec = ConvCodeSpec.for_rate('1/2')
        generator = np.random.default_rng(3)
        a = generator.integers(0, 2, 20).astype(np.int8)
        b = generator.integers(0, 2, 20).astype(np.int8)
        assert np.array_equal(cc_encode(a ^ b, spec), cc_encode(a, spec) ^ cc_encode(b, spec))

    def test_all_zero_message(self):
        coded = cc_encode(np.zeros(8, dtype=np.int8), ConvCodeSpec())
        assert not coded.any()

    def test_unknown_rate(self):
        with pytest.raises(ValueError):
            ConvCodeSpec.for_rate('2/3')

    def test_depuncture_restores_positions(self):
        spec = ConvCodeSpec.for_rate('5/6')
        values = np.arange(1, spec.coded_length(4) + 1, dtype=np.float64)
        mother = depuncture(values, spec, 4)
        assert mother.size == spec.mother_length(4)
        assert_allclose(mother[spec.keep_mask(4)], values)
        assert not mother[~spec.keep_mask(4)].any()


class TestBcjr:
    @pytest.mark.parametrize('rate', ['1/2', '5/6'])
    def test_matches_exhaustive_map(self, rate):
        spec = ConvCodeSpec.for_rate(rate)
        n_message = 8
        channel_llrs = np.random.default_rng(4).normal(0.0, 2.0, spec.coded_length(n_message))
        message_app, coded_ext = bcjr_decode(channel_llrs, None, spec, n_message)
        expected_app, expected_coded = exhaustive_app(spec, n_message, channel_llrs)
        assert_allclose(message_app, expected_app, atol=1e-6)
        assert_allclose(coded_ext, expected_coded - channel_llrs, atol=1e-6)

    def test_apriori_shifts_the_decision(self):
        spec = ConvCodeSpec()
        channel_llrs = np.zeros(spec.coded_length(6))
        apriori = np.array([5.0, -5.0, 0.0, 0.0, 0.0, 0.0])
        message_app, _ = bcjr_decode(channel_llrs, apriori, spec, 6)
        assert_allclose(message_app, apriori, atol=1e-9)

    def test_noiseless_decoding(self):
        spec = ConvCodeSpec.for_rate('5/6')
        message = np.random.default_rng(5).integers(0, 2, 40).astype(np.int8)
        llrs = 8.0 * (2.0 * cc_encode(message, spec) - 1.0)
        message_app, _ = bcjr_decode(llrs, None, spec, 40)
        assert np.array_equal((message_app > 0).astype(np.int8), message)

    def test_wrong_length(self):
        with pytest.raises(InvalidLength):
            bcjr_decode(np.zeros(7), None, ConvCodeSpec(), 4)
