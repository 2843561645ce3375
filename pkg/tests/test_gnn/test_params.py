"""Tests for parameter containers, initialization and Adam"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.gnn.optimizer import AdamState, adam_step
from src.gnn.params import GnnHyperparams, GnnParameters, glorot_init, glorot_normal, parameter_shapes, zero_init
from src.numerics.rng import SeededRng
from src.utils.exceptions import DimensionMismatch


class TestParameters:
    def test_shapes(self):
        shapes = parameter_shapes(GnnHyperparams(n_u=8, n_h1=64, n_h2=32), 4)
        assert shapes['msg_w1'] == (64, 18)
        assert shapes['gru_wz'] == (64, 10)
        assert shapes['read_w3'] == (4, 32)
        assert list(shapes)[0] == 'init_w'

    def test_glorot_variance(self):
        draw = glorot_normal((200, 300), SeededRng(0))
        assert draw.mean() == pytest.approx(0.0, abs=0.002)
        assert draw.var() == pytest.approx(2.0 / 500, rel=0.03)

    def test_init_biases_are_zero(self, tiny_hyperparams):
        params = glorot_init(tiny_hyperparams, 2, SeededRng(1))
        assert not params['msg_b1'].any()
        assert params['msg_w1'].any()

    def test_rejects_wrong_shapes(self, tiny_hyperparams):
        tensors = dict(zero_init(tiny_hyperparams, 2).items())
        tensors['read_b3'] = np.zeros(3)
        with pytest.raises(DimensionMismatch):
            GnnParameters(tiny_hyperparams, 2, tensors)

    def test_invalid_hyperparams(self):
        with pytest.raises(ValueError):
            GnnHyperparams(n_u=0)


class TestAdam:
    def test_first_step_moves_by_learning_rate(self, tiny_params):
        grads = tiny_params.map(lambda _, t: np.where(np.arange(t.size).reshape(t.shape) % 2, 1.5, -0.5))
        state = AdamState()
        updated = adam_step(tiny_params, grads, state, lr=0.01)
        for name, tensor in tiny_params.items():
            assert_allclose(updated[name], tensor - 0.01 * np.sign(grads[name]), atol=1e-9)
        assert state.step == 1

    def test_zero_gradient_leaves_params(self, tiny_params):
        updated = adam_step(tiny_params, tiny_params.zeros_like(), AdamState())
        assert updated.equals(tiny_params)

    def test_two_steps_on_a_constant_gradient_match_one_double_step(self, tiny_params):
        grads = tiny_params.map(lambda _, t: np.where(np.arange(t.size).reshape(t.shape) % 3, 0.8, -2.0))
        state = AdamState()
        twice = adam_step(adam_step(tiny_params, grads, state, lr=0.005), grads, state, lr=0.005)
        once = adam_step(tiny_params, grads, AdamState(), lr=0.01)
        for name, tensor in twice.items():
            assert_allclose(tensor, once[name], atol=1e-9)
        assert state.step == 2
