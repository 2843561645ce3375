"""Tests for the detector/decoder loop"""

import math

import numpy as np
import pytest

from src.channel.models import ChannelModelSpec
from src.detection.ep import EpConfig, ep_detect
from src.gepnet.model import GepnetConfig
from src.modem.constellation import Constellation
from src.modem.mapping import prior_pdf_from_llrs
from src.numerics.rng import SeededRng
from src.turbo.codecs import ChannelCodec, CodeConfig, CodeKind
from src.turbo.receiver import (
    CsiConfig,
    DetectorKind,
    SoftDetector,
    TurboConfig,
    TurboReceiver,
    parse_detector
)
from src.utils.exceptions import UnknownAlgorithm


def make_receiver(constellation, detector=DetectorKind.EP, iterations=2, code=None,
                  csi=None, spec=None, **overrides):
    code = code or CodeConfig(kind=CodeKind.CC, message_length=24)
    config = TurboConfig(iterations=iterations, detector=detector, code=code, **overrides)
    soft = SoftDetector(detector, constellation, ep_config=EpConfig())
    return TurboReceiver(spec or ChannelModelSpec(2, 2), constellation, config, soft, csi=csi)


class TestCodecs:
    def test_lengths(self):
        assert ChannelCodec(CodeConfig(kind='cc', message_length=24)).n_coded == 60
        assert ChannelCodec(CodeConfig(kind='cc', message_length=24, rate='5/6')).n_coded == 36
        assert ChannelCodec(CodeConfig(kind='turbo', message_length=24)).n_coded == 60
        assert ChannelCodec(CodeConfig(kind='uncoded', message_length=24)).n_coded == 24

    def test_uncoded_pass_through(self):
        codec = ChannelCodec(CodeConfig(kind='uncoded', message_length=4))
        app, ext = codec.decode(np.array([1.0, -2.0, 3.0, -4.0]))
        assert np.array_equal(app, [1.0, -2.0, 3.0, -4.0])
        assert not ext.any()


class TestReceiver:
    def test_slot_layout(self, qpsk):
        receiver = make_receiver(qpsk)
        assert receiver.bits_per_slot == 4
        assert receiver.n_slots == 15
        transmission = receiver.transmit(SeededRng(1), 10.0)
        assert transmission.slot_bits.shape == (15, 4)
        assert transmission.instance.H.shape == (15, 4, 4)

    @pytest.mark.parametrize('kind', ['cc', 'turbo'])
    def test_noiseless_decoding(self, qam16, kind):
        receiver = make_receiver(qam16, code=CodeConfig(kind=kind, message_length=24))
        outcome = receiver.run_idd(receiver.transmit(SeededRng(2), math.inf))
        assert outcome.decisions.shape == (2, 24)
        assert np.array_equal(outcome.decisions[0], outcome.message)
        assert np.array_equal(outcome.decisions[1], outcome.message)
        assert np.array_equal(outcome.symbol_decisions[0], outcome.symbol_truth)

    def test_first_iteration_does_not_depend_on_the_count(self, qpsk):
        single = make_receiver(qpsk, iterations=1)
        double = make_receiver(qpsk, iterations=2)
        first = single.run_idd(single.transmit(SeededRng(3), 2.0))
        second = double.run_idd(double.transmit(SeededRng(3), 2.0))
        assert np.array_equal(first.decisions[0], second.decisions[0])

    def test_uncoded_runs_one_iteration(self, qpsk):
        receiver = make_receiver(qpsk, iterations=3, code=CodeConfig(kind='uncoded', message_length=16),
                                 max_words=20)
        assert receiver.iterations == 1
        counters = receiver.simulate(math.inf, SeededRng(4), threads=1)
        assert len(counters) == 1
        assert counters[0].bit_errors == 0

    def test_results_do_not_depend_on_threads(self, qpsk):
        kwargs = dict(max_words=10, block_words=3, max_word_errors=4)
        single = make_receiver(qpsk, **kwargs).simulate(3.0, SeededRng(5), threads=1)
        pooled = make_receiver(qpsk, **kwargs).simulate(3.0, SeededRng(5), threads=4)
        assert [c.as_dict() for c in single] == [c.as_dict() for c in pooled]

    def test_word_cap(self, qpsk):
        counters = make_receiver(qpsk, max_words=5, block_words=2).simulate(30.0, SeededRng(6))
        assert counters[-1].words == 5

    def test_estimated_csi_at_high_snr(self, qpsk):
        receiver = make_receiver(qpsk, csi=CsiConfig(mode='estimated', n_pilots=4))
        transmission = receiver.transmit(SeededRng(7), math.inf)
        assert np.allclose(transmission.detector_instance.H, transmission.instance.H, atol=1e-3)
        outcome = receiver.run_idd(transmission)
        assert np.array_equal(outcome.decisions[-1], outcome.message)

    def test_traces(self, qpsk):
        receiver = make_receiver(qpsk, record_traces=True)
        outcome = receiver.run_idd(receiver.transmit(SeededRng(8), 5.0))
        assert len(outcome.traces) == 2
        assert not outcome.traces[0]['prior'].any()

    def test_precisions_stay_positive_across_iterations(self, qam16):
        receiver = make_receiver(qam16, iterations=3, record_traces=True)
        transmission = receiver.transmit(SeededRng(9), 12.0)
        outcome = receiver.run_idd(transmission)
        k = transmission.detector_instance.K
        for trace in outcome.traces:
            priors = prior_pdf_from_llrs(trace['prior'].reshape(-1, k, qam16.Q), qam16)
            result = ep_detect(transmission.detector_instance, priors, EpConfig(), qam16, record=True)
            assert all(np.all(layer.lam > 0.0) for layer in result.trace)

    def test_totals_are_the_sum_of_word_counters(self, qpsk):
        receiver = make_receiver(qpsk, max_words=5, block_words=2, max_word_errors=None)
        rng = SeededRng(10)
        totals = receiver.simulate(4.0, rng)
        for it, total in enumerate(totals):
            words = [receiver._count_word(rng, 4.0, w)[it] for w in range(5)]
            assert total.bit_errors == sum(c.bit_errors for c in words)
            assert total.symbol_errors == sum(c.symbol_errors for c in words)
            assert total.words == 5


class TestSoftDetector:
    @pytest.mark.parametrize('kind', ['ep', 'lmmse', 'map'])
    def test_classical_detectors(self, qpsk, small_batch, kind, random_llrs):
        instance, _, _ = small_batch
        detector = SoftDetector(kind, qpsk)
        llrs = detector.detect(instance, random_llrs((6, 4)))
        assert llrs.shape == (6, 4)
        assert np.all(np.isfinite(llrs))

    def test_learned_detector_needs_weights(self, qpsk):
        with pytest.raises(ValueError):
            SoftDetector('ext_gepnet', qpsk)

    @pytest.mark.parametrize('kind', ['gepnet_app', 'ext_gepnet'])
    def test_learned_detectors(self, qpsk, small_batch, tiny_params, tiny_hyperparams, kind, random_llrs):
        instance, _, _ = small_batch
        config = GepnetConfig(ep=EpConfig(layers=2), gnn=tiny_hyperparams)
        priors = random_llrs((6, 4))
        plain = SoftDetector(kind, qpsk, gepnet_config=config, params=tiny_params)
        masked = SoftDetector(kind, qpsk, gepnet_config=config, params=tiny_params, masked=True)
        assert plain.detect(instance, priors).shape == (6, 4)
        moved = priors.copy()
        moved[:, 2] += 5.0
        assert np.array_equal(masked.detect(instance, priors)[:, 2], masked.detect(instance, moved)[:, 2])

    def test_parse_detector(self):
        assert parse_detector('EXT_GEPNET') == DetectorKind.EXT_GEPNET
        assert DetectorKind.GEPNET_IA0.learned and not DetectorKind.MAP.learned
        with pytest.raises(UnknownAlgorithm):
            parse_detector('sphere')

    def test_members_pass_through(self):
        assert parse_detector(DetectorKind.EP) is DetectorKind.EP
        assert TurboConfig(detector=DetectorKind.EXT_GEPNET).detector is DetectorKind.EXT_GEPNET
        assert TurboConfig(detector='Lmmse').detector is DetectorKind.LMMSE
        assert SoftDetector(DetectorKind.EP, Constellation.from_name('qpsk')).kind is DetectorKind.EP
