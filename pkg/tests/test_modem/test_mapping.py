"""Tests for modulation and the soft conversions"""

import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import expit

from src.modem.mapping import (
    demodulate_hard,
    gaussian_to_llrs,
    log_prior_from_llrs,
    modulate,
    pdf_to_extrinsic_llrs,
    prior_moments,
    prior_pdf_from_llrs
)
from src.utils.exceptions import InvalidLength


class TestModulation:
    def test_hard_demodulation_recovers_bits(self, qam16):
        bits = np.array(list(itertools.product([0, 1], repeat=4))).reshape(-1)
        assert np.array_equal(demodulate_hard(modulate(bits, qam16), qam16), bits)

    def test_gray_mapping_of_16qam(self, qam16):
        x = modulate(np.array([0, 0, 0, 1, 1, 1, 1, 0]), qam16)
        assert_allclose(x, np.array([-3, -1, 1, 3]) / np.sqrt(10))

    def test_incomplete_symbol(self, qam16):
        with pytest.raises(InvalidLength):
            modulate(np.array([0, 1, 1]), qam16)


class TestSoftConversions:
    def test_zero_llrs_give_uniform_prior(self, qam16):
        assert_allclose(prior_pdf_from_llrs(np.zeros((3, 2)), qam16), 0.25)

    def test_prior_is_product_of_bernoullis(self, qam16, random_llrs):
        llrs = random_llrs((5, 2))
        ones = expit(llrs)
        expected = np.ones((5, 4))
        for m, label in enumerate(qam16.bit_map):
            for i, bit in enumerate(label):
                expected[:, m] *= ones[:, i] if bit else 1.0 - ones[:, i]
        assert_allclose(prior_pdf_from_llrs(llrs, qam16), expected, rtol=1e-10)

    def test_product_prior_demaps_to_its_llrs(self, qam16, random_llrs):
        llrs = random_llrs((6, 2))
        recovered = pdf_to_extrinsic_llrs(prior_pdf_from_llrs(llrs, qam16), qam16)
        assert_allclose(recovered, llrs, atol=1e-9)

    def test_llrs_are_clipped(self, qpsk):
        log_prior = log_prior_from_llrs(np.array([[100.0]]), qpsk)
        assert log_prior[0, 1] - log_prior[0, 0] == pytest.approx(30.0)

    def test_prior_moments(self, qpsk):
        mean, variance = prior_moments(np.array([0.25, 0.75]), qpsk)
        a = qpsk.levels[1]
        assert mean == pytest.approx(0.5 * a)
        assert variance == pytest.approx(a ** 2 - 0.25 * a ** 2)

    def test_prior_variance_is_bounded_by_the_outer_level(self, qam16):
        pdfs = np.random.default_rng(12).dirichlet(np.full(qam16.M, 0.3), size=500)
        pdfs[0] = [0.5, 0.0, 0.0, 0.5]
        _, variance = prior_moments(pdfs, qam16)
        assert np.all(variance >= 0.0)
        assert np.all(variance <= qam16.max_level ** 2 + 1e-12)
        assert variance[0] == pytest.approx(qam16.max_level ** 2)

    def test_binary_gaussian_llr_closed_form(self, qpsk):
        mean = np.array([0.3, -0.2, 0.05])
        variance = np.array([0.5, 0.1, 2.0])
        a = qpsk.levels[1]
        llrs = gaussian_to_llrs(mean, variance, qpsk)[:, 0]
        assert_allclose(llrs, 2.0 * a * mean / variance, rtol=1e-10)

    def test_llr_sign_follows_label(self, qam16):
        llrs = gaussian_to_llrs(np.array([qam16.levels[3]]), np.array([0.01]), qam16)
        assert llrs[0, 0] > 0 and llrs[0, 1] < 0
