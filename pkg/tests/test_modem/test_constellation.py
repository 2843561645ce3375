"""Tests for PAM levels and Gray labels"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.modem.constellation import Constellation


class TestConstellation:
    def test_qpsk_levels(self, qpsk):
        assert (qpsk.M, qpsk.Q) == (2, 1)
        assert_allclose(qpsk.levels, [-1 / np.sqrt(2), 1 / np.sqrt(2)])
        assert qpsk.es == pytest.approx(0.5)

    def test_16qam_levels(self, qam16):
        assert (qam16.M, qam16.Q) == (4, 2)
        assert_allclose(qam16.levels, np.array([-3, -1, 1, 3]) / np.sqrt(10))
        assert qam16.es == pytest.approx(0.5)

    @pytest.mark.parametrize('name', ['qpsk', '16qam', '64qam', '256qam'])
    def test_adjacent_levels_differ_in_one_bit(self, name):
        const = Constellation.from_name(name)
        flips = np.abs(np.diff(const.bit_map.astype(int), axis=0)).sum(axis=1)
        assert np.all(flips == 1)
        assert np.all(np.diff(const.levels) > 0)

    def test_16qam_gray_labels_msb_first(self, qam16):
        assert qam16.bit_map.tolist() == [[0, 0], [0, 1], [1, 1], [1, 0]]

    def test_rejects_non_square_orders(self):
        with pytest.raises(ValueError):
            Constellation.from_qam(8)
        with pytest.raises(ValueError):
            Constellation.from_name('8psk')
