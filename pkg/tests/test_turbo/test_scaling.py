"""Tests for decoder LLR scaling"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.turbo.scaling import LlrScaler, scale_decoder_llrs


class TestScaling:
    def test_identity_inside_range(self):
        llrs = np.array([-3.0, 0.5, 4.0])
        assert np.array_equal(scale_decoder_llrs(llrs, LlrScaler(r=4.0)), llrs)
        assert np.array_equal(scale_decoder_llrs(llrs, None), llrs)

    def test_shrinks_to_the_range(self):
        llrs = np.array([-10.0, 2.0, 5.0])
        scaled = scale_decoder_llrs(llrs, LlrScaler(r=5.0))
        assert_allclose(scaled, [-5.0, 1.0, 2.5])
        assert np.array_equal(np.sign(scaled), np.sign(llrs))

    def test_range_covers_the_training_distribution(self):
        generator = np.random.default_rng(0)
        fit = generator.normal(4.0, np.sqrt(8.0), 1_000_000)
        fresh = generator.normal(4.0, np.sqrt(8.0), 1_000_000)
        scaler = LlrScaler.from_training_llrs(fit)
        assert 0.96 <= np.mean(np.abs(fresh) <= scaler.r) <= 0.98

    def test_from_metadata(self):
        assert LlrScaler.from_metadata({'llr_range': 7.5}).r == 7.5
        assert LlrScaler.from_metadata({}) is None

    def test_positive_range(self):
        with pytest.raises(ValueError):
            LlrScaler(r=0.0)
