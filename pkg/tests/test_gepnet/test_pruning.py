"""Tests for covariance-driven edge pruning"""

import numpy as np
import pytest

from src.channel.models import ChannelModelSpec
from src.detection.ep import EpConfig, ep_detect
from src.gepnet.pruning import measure_retention, prune_edges, retention_fraction
from src.gnn.network import full_mask
from src.numerics.rng import SeededRng


@pytest.fixture
def covariances(qam16, batch_factory, rng):
    instance, _, _ = batch_factory(ChannelModelSpec(4, 4), qam16, 10.0, 20, rng)
    return ep_detect(instance, None, EpConfig(), qam16, record=True).trace[2].sigma


class TestPruneEdges:
    def test_zero_alpha_keeps_every_edge(self, covariances):
        assert np.array_equal(prune_edges(covariances, 0.0), full_mask(covariances.shape[:-1]))

    def test_masks_shrink_with_alpha(self, covariances):
        previous = prune_edges(covariances, 0.0)
        for alpha in (0.25, 0.5, 1.0, 2.0, 4.0):
            mask = prune_edges(covariances, alpha)
            assert not np.any(mask & ~previous)
            previous = mask

    def test_never_self_loops(self, covariances):
        mask = prune_edges(covariances, 1.0)
        assert not mask[..., np.arange(8), np.arange(8)].any()

    def test_known_pruning(self):
        sigma = np.array([[1.0, 0.9, 0.0], [0.9, 1.0, 0.1], [0.0, 0.1, 1.0]])
        mask = prune_edges(sigma, 1.0)
        assert mask[0, 1] and mask[1, 0]
        assert not mask[0, 2]
        assert mask[1, 2]

    def test_negative_alpha(self, covariances):
        with pytest.raises(ValueError):
            prune_edges(covariances, -0.1)


class TestRetention:
    def test_full_graph_fraction(self):
        assert np.all(retention_fraction(full_mask((3, 5))) == 1.0)

    def test_measured_retention_is_monotone(self, qam16):
        frame = measure_retention(ChannelModelSpec(4, 4), qam16, 10.0, [0.0, 0.5, 2.0], 16,
                                  SeededRng(2), EpConfig(layers=3))
        assert list(frame.columns) == ['alpha', 'layer', 'retention']
        assert len(frame) == 9
        assert np.all(frame.loc[frame['alpha'] == 0.0, 'retention'] == 1.0)
        by_alpha = frame.groupby('alpha')['retention'].mean()
        assert by_alpha.is_monotonic_decreasing

    @pytest.mark.slow
    @pytest.mark.parametrize('snr_db', [10.0, 20.0])
    def test_retention_near_reference_levels(self, qam16, snr_db):
        expected = {0.5: 0.429, 1.0: 0.304, 2.0: 0.185, 4.0: 0.068}
        frame = measure_retention(ChannelModelSpec(4, 4), qam16, snr_db, list(expected), 1000,
                                  SeededRng(40), EpConfig())
        measured = frame.groupby('alpha')['retention'].mean()
        for alpha, level in expected.items():
            assert measured[alpha] == pytest.approx(level, abs=0.10)
