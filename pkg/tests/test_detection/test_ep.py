"""Tests for the EP detector"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import softmax

from src.channel.models import ChannelModelSpec, RealChannelInstance
from src.detection.ep import (
    EpConfig,
    EpState,
    cavity,
    ep_detect,
    lmmse_step,
    natural_update,
    posterior_moments
)
from src.modem.mapping import demodulate_hard, prior_pdf_from_llrs
from src.numerics.rng import SeededRng


def exact_scalar_posterior(instance, constellation, prior_pdfs=None):
    """Mean and variance of p(x | y) for K = 1 by direct evaluation"""
    h = instance.H[..., :, 0]
    residual = instance.y[..., None, :] - constellation.levels[:, None] * h[..., None, :]
    log_w = -0.5 * np.sum(residual ** 2, axis=-1) / instance.sigma_w2[..., None]
    if prior_pdfs is not None:
        log_w = log_w + np.log(prior_pdfs[..., 0, :])
    w = softmax(log_w, axis=-1)
    mean = w @ constellation.levels
    return mean, w @ constellation.levels ** 2 - mean ** 2


class TestEpExactness:
    @pytest.mark.parametrize('layers', [1, 3, 5])
    def test_single_symbol_posterior_is_exact(self, qam16, layers):
        generator = np.random.default_rng(8)
        H = generator.normal(size=(20, 2, 1))
        x = qam16.levels[generator.integers(0, 4, 20)][:, None]
        sigma_w2 = np.full(20, 0.5)
        y = np.einsum('snk,sk->sn', H, x) + generator.normal(0.0, math.sqrt(0.5), (20, 2))
        instance = RealChannelInstance(H, y, sigma_w2)
        result = ep_detect(instance, None, EpConfig(layers=layers), qam16)
        mean, variance = exact_scalar_posterior(instance, qam16)
        assert_allclose(result.xhat[:, 0], mean, atol=1e-9)
        assert_allclose(result.v[:, 0], variance, atol=1e-9)

    def test_single_symbol_with_priors(self, qam16, random_llrs):
        generator = np.random.default_rng(9)
        H = generator.normal(size=(10, 2, 1))
        y = generator.normal(size=(10, 2))
        instance = RealChannelInstance(H, y, np.full(10, 0.8))
        priors = prior_pdf_from_llrs(random_llrs((10, 1, 2), 1.0), qam16)
        result = ep_detect(instance, priors, EpConfig(layers=3), qam16)
        mean, variance = exact_scalar_posterior(instance, qam16, priors)
        assert_allclose(result.xhat[:, 0], mean, atol=1e-9)
        assert_allclose(result.v[:, 0], variance, atol=1e-9)


class TestEpBehaviour:
    def test_noiseless_decisions(self, qpsk, batch_factory, rng):
        instance, bits, _ = batch_factory(ChannelModelSpec(4, 4), qpsk, math.inf, 10, rng)
        result = ep_detect(instance, None, EpConfig(), qpsk)
        assert np.array_equal((result.llrs > 0).astype(int), bits)
        assert np.array_equal(demodulate_hard(result.xhat, qpsk), bits)

    def test_output_shapes_and_trace(self, qam16, batch_factory, rng):
        instance, _, _ = batch_factory(ChannelModelSpec(2, 2), qam16, 12.0, 3, rng)
        result = ep_detect(instance, None, EpConfig(layers=4), qam16, record=True)
        assert result.llrs.shape == (3, 8)
        assert result.posterior.shape == (3, 4, 4)
        assert len(result.trace) == 4
        assert np.all(np.abs(result.llrs) <= 30.0)

    def test_negative_precision_keeps_previous_site(self):
        state = EpState(gamma=np.array([0.3, 0.1]), lam=np.array([2.0, 2.0]),
                        x_e=np.array([0.1, 0.1]), v_e=np.array([0.5, 0.5]))
        gamma, lam = natural_update(state, np.array([0.2, 0.2]), np.array([1.0, 0.25]), 0.2)
        assert gamma[0] == 0.3 and lam[0] == 2.0
        assert lam[1] == pytest.approx(0.2 * (4.0 - 2.0) + 0.8 * 2.0)

    def test_cavity_floors_the_denominator(self):
        state = EpState(gamma=np.zeros(1), lam=np.array([4.0]),
                        mu=np.zeros(1), sigma=np.array([[0.5]]))
        _, v_e = cavity(state, 1e-8)
        assert np.isfinite(v_e).all() and v_e[0] > 0

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            EpConfig(layers=0)
        with pytest.raises(ValueError):
            EpConfig(damping=1.5)


class TestCavity:
    def test_zero_precision_returns_the_marginal(self):
        state = EpState(gamma=np.zeros(2), lam=np.zeros(2), mu=np.array([0.4, -1.2]),
                        sigma=np.array([[0.3, 0.1], [0.1, 0.7]]))
        x_e, v_e = cavity(state, 1e-8)
        assert_allclose(x_e, [0.4, -1.2])
        assert_allclose(v_e, [0.3, 0.7])

    def test_recombining_reproduces_the_marginal(self):
        generator = np.random.default_rng(3)
        lam = generator.uniform(0.5, 2.0, 3)
        gamma = generator.normal(size=3)
        instance = RealChannelInstance(generator.normal(size=(4, 3)), generator.normal(size=4),
                                       np.array(0.5))
        state = EpState(gamma=gamma, lam=lam)
        state.mu, state.sigma = lmmse_step(state, instance)
        x_e, v_e = cavity(state, 1e-12)
        precision = 1.0 / v_e + lam
        assert_allclose(1.0 / precision, np.diag(state.sigma), rtol=1e-10)
        assert_allclose((x_e / v_e + gamma) / precision, state.mu, rtol=1e-10)

    def test_saturated_prior_keeps_the_observation(self):
        instance = RealChannelInstance(np.array([[1.0]]), np.array([0.7]), np.array(0.1))
        state = EpState(gamma=np.array([1e8]), lam=np.array([1e8]))
        state.mu, state.sigma = lmmse_step(state, instance)
        assert state.sigma[0, 0] < 1e-8
        x_e, v_e = cavity(state, 1e-8)
        assert_allclose(v_e, [0.1], rtol=1e-6)
        assert_allclose(x_e, [0.7], rtol=1e-6)

    def test_perfect_priors_do_not_add_sign_errors(self, qam16, batch_factory):
        instance, bits, x = batch_factory(ChannelModelSpec(2, 2), qam16, 30.0, 200, SeededRng(31))
        perfect = 30.0 * (2.0 * bits - 1.0)
        priors = prior_pdf_from_llrs(perfect.reshape(200, 4, 2), qam16)

        blind = ep_detect(instance, None, EpConfig(), qam16)
        informed = ep_detect(instance, priors, EpConfig(), qam16, record=True)
        blind_errors = np.sum((blind.llrs > 0) != bits)
        informed_errors = np.sum((informed.llrs > 0) != bits)
        assert informed_errors <= blind_errors
        assert np.median(np.abs(informed.trace[0].x_e - x)) < 0.5


class TestNaturalUpdate:
    @pytest.fixture
    def state(self):
        return EpState(gamma=np.array([0.3, -0.2]), lam=np.array([1.5, 0.8]),
                       x_e=np.array([0.5, -0.4]), v_e=np.array([0.6, 0.9]))

    def test_zero_damping_is_a_fixed_point(self, state):
        gamma, lam = natural_update(state, np.array([0.7, -0.1]), np.array([0.2, 0.3]), 0.0)
        assert np.array_equal(gamma, state.gamma)
        assert np.array_equal(lam, state.lam)

    def test_full_damping_takes_the_moment_matched_site(self, state):
        xhat, v = np.array([0.7, -0.1]), np.array([0.2, 0.3])
        gamma, lam = natural_update(state, xhat, v, 1.0)
        assert_allclose(lam, 1.0 / v - 1.0 / state.v_e)
        assert_allclose(gamma, xhat / v - state.x_e / state.v_e)

    @pytest.mark.parametrize('llr_scale', [0.0, 2.0, 30.0])
    def test_precisions_stay_positive(self, qam16, batch_factory, llr_scale):
        instance, bits, _ = batch_factory(ChannelModelSpec(4, 4), qam16, 8.0, 40, SeededRng(32))
        generator = np.random.default_rng(33)
        llrs = llr_scale * (2.0 * bits - 1.0) + generator.normal(0.0, 1.0, bits.shape)
        priors = prior_pdf_from_llrs(llrs.reshape(40, 8, 2), qam16)
        result = ep_detect(instance, priors, EpConfig(), qam16, record=True)
        assert all(np.all(layer.lam > 0.0) for layer in result.trace)
        assert all(np.all(np.isfinite(layer.x_e)) for layer in result.trace)

    def test_zero_damping_freezes_every_layer(self, qam16, batch_factory):
        instance, _, _ = batch_factory(ChannelModelSpec(2, 2), qam16, 10.0, 5, SeededRng(34))
        result = ep_detect(instance, None, EpConfig(layers=4, damping=0.0), qam16, record=True)
        for layer in result.trace[1:]:
            assert np.array_equal(layer.x_e, result.trace[0].x_e)
            assert np.array_equal(layer.v_e, result.trace[0].v_e)

    def test_posterior_variance_is_bounded_by_the_outer_level(self, qam16, random_llrs):
        generator = np.random.default_rng(35)
        x_e = generator.normal(0.0, 4.0, (50, 3))
        v_e = generator.uniform(1e-3, 20.0, (50, 3))
        priors = prior_pdf_from_llrs(random_llrs((50, 3, 2)), qam16)
        _, variance, _ = posterior_moments(x_e, v_e, priors, qam16)
        assert np.all(variance <= qam16.max_level ** 2 + 1e-12)
