"""Tests for the mutual-information lookup table and prior sampling"""

import numpy as np
import pytest

from src.numerics.rng import SeededRng
from src.training.ia_lut import (
    IA_SET,
    build_ia_lut,
    j_function,
    sample_mixed_prior_llrs,
    sample_prior_llrs
)


@pytest.fixture(scope='module')
def lut():
    return build_ia_lut()


class TestLookupTable:
    def test_endpoints(self, lut):
        assert lut.mu_for(0.0) == 0.0
        assert lut.mu_for(1.0) == 100.0

    def test_increasing(self, lut):
        assert lut.ia_values == IA_SET
        assert all(a < b for a, b in zip(lut.mu_values, lut.mu_values[1:]))

    def test_inverse_is_consistent(self, lut):
        for ia, mu in zip(lut.ia_values[1:-1], lut.mu_values[1:-1]):
            assert j_function(mu) == pytest.approx(ia, abs=1e-9)

    def test_monte_carlo_mutual_information(self):
        mu = build_ia_lut(ia_set=(0.5,)).mu_for(0.5)
        llrs = SeededRng(3).normal(mu, np.sqrt(2.0 * mu), 4_000_000)
        estimate = 1.0 - np.mean(np.logaddexp(0.0, -llrs)) / np.log(2.0)
        assert estimate == pytest.approx(0.5, abs=1e-3)

    def test_membership_is_exact(self, lut):
        with pytest.raises(ValueError):
            lut.mu_for(0.5)


class TestPriorSampling:
    def test_zero_information_is_zero(self, lut, rng):
        bits = rng.integers(0, 2, size=(4, 6))
        assert not sample_prior_llrs(bits, 0.0, lut, rng).any()

    def test_consistent_gaussian_moments(self, lut, rng):
        mu = lut.mu_for(0.67)
        llrs = sample_prior_llrs(np.ones(1_000_000, dtype=np.int8), 0.67, lut, rng)
        assert llrs.mean() == pytest.approx(mu, rel=0.01)
        assert llrs.var() == pytest.approx(2.0 * mu, rel=0.01)
        zeros = sample_prior_llrs(np.zeros(1000, dtype=np.int8), 0.67, lut, rng)
        assert zeros.mean() < 0

    def test_one_level_per_row(self, lut, rng):
        bits = rng.integers(0, 2, size=(200, 8))
        llrs, ia = sample_mixed_prior_llrs(bits, lut, rng, ia_choices=(0.0, 1.0))
        assert set(np.unique(ia)) <= {0.0, 1.0}
        assert not llrs[ia == 0.0].any()
        certain = llrs[ia == 1.0]
        assert np.array_equal(certain > 0, bits[ia == 1.0] == 1)
