"""
Shared Test Fixtures
Small systems and networks that keep every test well under a second.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.channel.generation import apply_awgn, generate_channel
from src.channel.models import ChannelModelSpec
from src.gnn.params import GnnHyperparams, glorot_init
from src.modem.constellation import Constellation
from src.modem.mapping import modulate
from src.numerics.rng import SeededRng


@pytest.fixture
def rng():
    return SeededRng(1234)


@pytest.fixture
def qpsk():
    return Constellation.from_name('qpsk')


@pytest.fixture
def qam16():
    return Constellation.from_name('16qam')


@pytest.fixture
def small_spec():
    return ChannelModelSpec(n_r=2, n_t=2)


@pytest.fixture
def tiny_hyperparams():
    return GnnHyperparams(n_u=4, n_h1=8, n_h2=6, rounds=2)


@pytest.fixture
def tiny_params(tiny_hyperparams, qpsk, rng):
    return glorot_init(tiny_hyperparams, qpsk.M, rng.substream('weights'))


def make_batch(spec, constellation, snr_db, size, rng):
    """Random instances with their transmitted bits and symbols"""
    H = generate_channel(spec, rng.substream('channel'), size=size)
    bits = rng.substream('bits').integers(0, 2, size=(size, spec.K * constellation.Q))
    x = modulate(bits, constellation)
    instance = apply_awgn(H, x, snr_db, rng.substream('noise'), constellation.es)
    return instance, bits, x


@pytest.fixture
def small_batch(small_spec, qpsk, rng):
    return make_batch(small_spec, qpsk, 8.0, 6, rng)


@pytest.fixture
def random_llrs():
    generator = np.random.default_rng(7)
    return lambda shape, scale=3.0: generator.normal(0.0, scale, shape)


@pytest.fixture
def batch_factory():
    return make_batch
