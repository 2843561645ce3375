"""
Iterative Detection and Decoding
Detector and decoder exchange extrinsic LLRs through the channel
interleaver. A codeword spans ceil(N_c / (K Q)) slots, each with its own
channel draw; padding bits fill the last slot and never reach the decoder.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from tqdm import tqdm

from ..channel.estimation import channel_covariance, dft_pilot_matrix, lmmse_channel_estimate, transmit_pilots
from ..channel.generation import apply_awgn, complex_to_real, generate_complex_channel
from ..channel.models import ChannelModelSpec, RealChannelInstance
from ..coding.interleaver import InterleaverSpec, deinterleave, interleave
from ..config.settings import NUMERIC_CONFIG
from ..detection.baselines import lmmse_detect, map_oracle
from ..detection.ep import EpConfig, ep_detect
from ..gepnet.model import GepnetConfig, OutputHead, detector_llrs, gepnet_forward, masked_extrinsic_llrs
from ..gnn.params import GnnParameters
from ..modem.constellation import Constellation
from ..modem.mapping import modulate, prior_moments, prior_pdf_from_llrs
from ..numerics.rng import SeededRng
from ..utils.exceptions import UnknownAlgorithm
from ..utils.helpers import bits_to_int
from .codecs import ChannelCodec, CodeConfig, CodeKind
from .metrics import ErrorCounter, accumulate_metrics
from .scaling import DEFAULT_COVERAGE, LlrScaler, scale_decoder_llrs

logger = logging.getLogger(__name__)


class DetectorKind(str, Enum):
    EP = 'ep'
    GEPNET_APP = 'gepnet_app'
    GEPNET_IA0 = 'gepnet_ia0'
    EXT_GEPNET = 'ext_gepnet'
    LMMSE = 'lmmse'
    MAP = 'map'

    @property
    def learned(self) -> bool:
        return self in (DetectorKind.GEPNET_APP, DetectorKind.GEPNET_IA0, DetectorKind.EXT_GEPNET)

    @property
    def head(self) -> OutputHead:
        return OutputHead.EXT if self == DetectorKind.EXT_GEPNET else OutputHead.APP


def parse_detector(name: str) -> DetectorKind:
    if isinstance(name, DetectorKind):
        return name
    try:
        return DetectorKind(str(name).lower())
    except ValueError:
        raise UnknownAlgorithm(f"Unknown detector '{name}'; choose from "
                               f"{[kind.value for kind in DetectorKind]}") from None


@dataclass(frozen=True)
class CsiConfig:
    """'perfect' hands the detector the true channel, 'estimated' its LMMSE estimate"""
    mode: str = 'perfect'
    n_pilots: Optional[int] = None
    covariance_prior: str = 'kronecker'

    def __post_init__(self):
        if self.mode not in ('perfect', 'estimated'):
            raise ValueError(f"Unknown CSI mode: {self.mode}")
        if self.covariance_prior not in ('kronecker', 'identity'):
            raise ValueError(f"Unknown covariance prior: {self.covariance_prior}")


@dataclass(frozen=True)
class TurboConfig:
    iterations: int = 2
    detector: DetectorKind = DetectorKind.EP
    code: CodeConfig = field(default_factory=CodeConfig)
    channel_interleaver_seed: Optional[int] = 1
    coverage: float = DEFAULT_COVERAGE
    max_word_errors: Optional[int] = 200
    max_bits: Optional[int] = 50_000_000
    max_words: int = 2000
    block_words: int = 32
    masked_verification: bool = False
    record_traces: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'detector', parse_detector(self.detector))
        if self.iterations < 1:
            raise ValueError(f"Need at least one turbo iteration, got {self.iterations}")
        if self.max_words < 1 or self.block_words < 1:
            raise ValueError("max_words and block_words must be positive")


class SoftDetector:
    """Maps (instance batch, prior LLRs (S, J)) to extrinsic LLRs (S, J)"""

    def __init__(self, kind: DetectorKind, constellation: Constellation,
                 ep_config: Optional[EpConfig] = None, gepnet_config: Optional[GepnetConfig] = None,
                 params: Optional[GnnParameters] = None, masked: bool = False):
        self.kind = parse_detector(kind)
        self.constellation = constellation
        self.ep_config = ep_config or (gepnet_config.ep if gepnet_config else EpConfig())
        self.gepnet_config = gepnet_config
        self.params = params
        self.masked = masked
        if self.kind.learned and (gepnet_config is None or params is None):
            raise ValueError(f"Detector '{self.kind.value}' needs GEPNet weights")

    def _priors(self, prior_llrs: np.ndarray, k: int) -> np.ndarray:
        shaped = prior_llrs.reshape(prior_llrs.shape[:-1] + (k, self.constellation.Q))
        return prior_pdf_from_llrs(shaped, self.constellation)

    def detect(self, instance: RealChannelInstance, prior_llrs: np.ndarray) -> np.ndarray:
        const = self.constellation
        k = instance.K
        clip = self.ep_config.llr_clip

        if self.kind == DetectorKind.EP:
            return ep_detect(instance, self._priors(prior_llrs, k), self.ep_config, const).llrs

        if self.kind == DetectorKind.LMMSE:
            means, variances = prior_moments(self._priors(prior_llrs, k), const)
            return lmmse_detect(instance, const, means, variances, self.ep_config.var_floor, clip).llrs

        if self.kind == DetectorKind.MAP:
            priors = self._priors(prior_llrs, k)
            return np.stack([map_oracle(instance[s], priors[s], const, clip).extrinsic_llrs
                             for s in range(len(instance))])

        head = self.kind.head
        if self.masked:
            return masked_extrinsic_llrs(instance, prior_llrs, self.params, self.gepnet_config,
                                         const, head=head)
        output = gepnet_forward(instance, self._priors(prior_llrs, k), self.params,
                                self.gepnet_config, const)
        return detector_llrs(output, head, const, prior_llrs=prior_llrs, clip=clip)


@dataclass
class Transmission:
    """One codeword on the air: message, slot bits, and the instances seen by
    the channel and by the detector"""
    message: np.ndarray
    slot_bits: np.ndarray
    instance: RealChannelInstance
    detector_instance: RealChannelInstance


@dataclass
class WordOutcome:
    message: np.ndarray
    decisions: np.ndarray
    symbol_truth: np.ndarray
    symbol_decisions: np.ndarray
    traces: List[Dict[str, np.ndarray]] = field(default_factory=list)


class TurboReceiver:
    """Transmit, detect and decode codewords at one SNR point"""

    def __init__(self, channel_spec: ChannelModelSpec, constellation: Constellation,
                 config: TurboConfig, detector: SoftDetector,
                 scaler: Optional[LlrScaler] = None, csi: Optional[CsiConfig] = None):
        self.channel_spec = channel_spec
        self.constellation = constellation
        self.config = config
        self.detector = detector
        self.scaler = scaler
        self.csi = csi or CsiConfig()
        self.codec = ChannelCodec(config.code)
        self.bits_per_slot = channel_spec.K * constellation.Q
        self.n_slots = math.ceil(self.codec.n_coded / self.bits_per_slot)
        self.interleaver = InterleaverSpec(self.codec.n_coded, seed=config.channel_interleaver_seed)
        self.iterations = config.iterations
        if self.codec.kind == CodeKind.UNCODED and self.iterations > 1:
            logger.warning("Uncoded mode has no decoder feedback; running a single iteration")
            self.iterations = 1
        self.stats = {'words': 0, 'slots': 0, 'duration_seconds': 0.0}

        if self.csi.mode == 'estimated':
            self.pilots = dft_pilot_matrix(self.csi.n_pilots or channel_spec.n_t, channel_spec.n_t)
            self.covariance = channel_covariance(channel_spec, self.csi.covariance_prior)

    def transmit(self, word_rng: SeededRng, snr_db: float) -> Transmission:
        bits_rng = word_rng.substream('bits')
        message = bits_rng.integers(0, 2, size=self.codec.n_message).astype(np.int8)
        coded = interleave(self.codec.encode(message), self.interleaver)
        padding = bits_rng.integers(0, 2, size=self.n_slots * self.bits_per_slot - coded.size)
        slot_bits = np.concatenate([coded, padding.astype(np.int8)]).reshape(self.n_slots, -1)

        Hc = generate_complex_channel(self.channel_spec, word_rng.substream('channel'), size=self.n_slots)
        H, _ = complex_to_real(Hc)
        x = modulate(slot_bits, self.constellation)
        instance = apply_awgn(H, x, snr_db, word_rng.substream('noise'), self.constellation.es)

        detector_instance = instance
        if self.csi.mode == 'estimated':
            sigma_w2 = float(instance.sigma_w2.reshape(-1)[0])
            estimates = np.stack([
                lmmse_channel_estimate(
                    transmit_pilots(Hc[s], self.pilots, sigma_w2, word_rng.substream('pilots', s)),
                    self.pilots, sigma_w2, self.covariance)
                for s in range(self.n_slots)
            ])
            detector_instance = instance.with_channel(complex_to_real(estimates)[0])
        return Transmission(message, slot_bits, instance, detector_instance)

    def _symbol_values(self, bits: np.ndarray) -> np.ndarray:
        groups = bits.reshape(bits.shape[:-1] + (-1, self.constellation.Q))
        return bits_to_int(groups)

    def run_idd(self, transmission: Transmission) -> WordOutcome:
        """Detector/decoder loop over `iterations`; first pass with uniform priors"""
        n_coded = self.codec.n_coded
        n_padded = self.n_slots * self.bits_per_slot
        clip = NUMERIC_CONFIG['llr_clip']
        decoder_ext = np.zeros(n_coded)
        decisions, symbol_decisions, traces = [], [], []

        for _ in range(self.iterations):
            prior = np.zeros(n_padded)
            prior[:n_coded] = interleave(decoder_ext, self.interleaver)
            prior_slots = prior.reshape(self.n_slots, -1)

            detector_ext = self.detector.detect(transmission.detector_instance, prior_slots)
            app = np.clip(detector_ext + prior_slots, -clip, clip)
            symbol_decisions.append(self._symbol_values((app > 0).astype(np.int8)))

            channel_llrs = deinterleave(detector_ext.reshape(-1)[:n_coded], self.interleaver)
            message_app, coded_ext = self.codec.decode(channel_llrs)
            decisions.append((message_app > 0).astype(np.int8))
            decoder_ext = scale_decoder_llrs(coded_ext, self.scaler)

            if self.config.record_traces:
                traces.append({'prior': prior_slots.copy(), 'detector_ext': detector_ext,
                               'message_app': message_app, 'decoder_ext': decoder_ext})

        return WordOutcome(
            message=transmission.message,
            decisions=np.stack(decisions),
            symbol_truth=self._symbol_values(transmission.slot_bits),
            symbol_decisions=np.stack(symbol_decisions),
            traces=traces,
        )

    def _run_word(self, point_rng: SeededRng, snr_db: float, word: int) -> WordOutcome:
        return self.run_idd(self.transmit(point_rng.substream('word', word), snr_db))

    def _count_word(self, point_rng: SeededRng, snr_db: float, word_index: int) -> List[ErrorCounter]:
        """Per-iteration counters of one word, merged by the caller in word order"""
        outcome = self._run_word(point_rng, snr_db, word_index)
        return [accumulate_metrics(ErrorCounter(), outcome.message, outcome.decisions[it],
                                   outcome.symbol_truth, outcome.symbol_decisions[it])
                for it in range(self.iterations)]

    def simulate(self, snr_db: float, point_rng: SeededRng, threads: int = 1,
                 progress: bool = False) -> List[ErrorCounter]:
        """Counters per turbo iteration

        Words run in fixed-size blocks; the stopping rule is checked only
        between blocks, so totals do not depend on the thread count.
        """
        cfg = self.config
        start_time = datetime.now()
        counters = [ErrorCounter() for _ in range(self.iterations)]
        done = 0
        bar = tqdm(total=cfg.max_words, desc=f'{cfg.detector.value}@{snr_db}dB', disable=not progress)
        with ThreadPoolExecutor(max_workers=max(int(threads), 1)) as pool:
            while done < cfg.max_words:
                block = range(done, min(done + cfg.block_words, cfg.max_words))
                per_word = list(pool.map(lambda w: self._count_word(point_rng, snr_db, w), block))
                for word_counters in per_word:
                    counters = [total.merge(part) for total, part in zip(counters, word_counters)]
                done += len(block)
                bar.update(len(block))
                if counters[-1].should_stop(cfg.max_word_errors, cfg.max_bits):
                    break
        bar.close()

        self.stats['words'] += done
        self.stats['slots'] += done * self.n_slots
        self.stats['duration_seconds'] += (datetime.now() - start_time).total_seconds()
        logger.info(f"{cfg.detector.value} at {snr_db} dB: {done} words, "
                    f"BER {counters[-1].ber:.3e}, WER {counters[-1].wer:.3e}")
        return counters

