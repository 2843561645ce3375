"""
Error-Rate Accounting
Exact integer counters merged across workers, with Wilson-interval
standard errors from statsmodels.
"""

import logging
from dataclasses import dataclass, fields
from typing import Dict, Optional

import numpy as np
from statsmodels.stats.proportion import proportion_confint

logger = logging.getLogger(__name__)

# Two-sided level whose Wilson interval spans one standard error each way
ONE_SIGMA_ALPHA = 0.31731050786291415


def wilson_stderr(errors: int, trials: int) -> float:
    """Half-width of the one-sigma Wilson interval"""
    if trials == 0:
        return float('nan')
    lower, upper = proportion_confint(errors, trials, alpha=ONE_SIGMA_ALPHA, method='wilson')
    return float((upper - lower) / 2.0)


@dataclass
class ErrorCounter:
    symbols: int = 0
    symbol_errors: int = 0
    bits: int = 0
    bit_errors: int = 0
    words: int = 0
    word_errors: int = 0

    @staticmethod
    def _rate(errors: int, trials: int) -> float:
        return errors / trials if trials else float('nan')

    @property
    def ser(self) -> float:
        return self._rate(self.symbol_errors, self.symbols)

    @property
    def ber(self) -> float:
        return self._rate(self.bit_errors, self.bits)

    @property
    def wer(self) -> float:
        return self._rate(self.word_errors, self.words)

    def stderr(self, metric: str = 'ber') -> float:
        pairs = {
            'ser': (self.symbol_errors, self.symbols),
            'ber': (self.bit_errors, self.bits),
            'wer': (self.word_errors, self.words),
        }
        return wilson_stderr(*pairs[metric])

    def merge(self, other: 'ErrorCounter') -> 'ErrorCounter':
        return ErrorCounter(**{f.name: getattr(self, f.name) + getattr(other, f.name)
                               for f in fields(self)})

    def should_stop(self, max_word_errors: Optional[int], max_bits: Optional[int]) -> bool:
        if max_word_errors is not None and self.word_errors >= max_word_errors:
            return True
        return max_bits is not None and self.bits >= max_bits

    def as_dict(self) -> Dict[str, float]:
        return {
            'ser': self.ser, 'ber': self.ber, 'wer': self.wer,
            'n_bits': self.bits, 'n_errors': self.bit_errors,
            'stderr_est': self.stderr('ber'),
        }


def accumulate_metrics(counter: ErrorCounter, truth_bits: np.ndarray, decided_bits: np.ndarray,
                       truth_symbols: Optional[np.ndarray] = None,
                       decided_symbols: Optional[np.ndarray] = None) -> ErrorCounter:
    """Add words laid out as rows (n_words, N_b) to `counter` in place"""
    truth_bits = np.atleast_2d(np.asarray(truth_bits))
    decided_bits = np.atleast_2d(np.asarray(decided_bits))
    if truth_bits.shape != decided_bits.shape:
        raise ValueError(f"Truth shape {truth_bits.shape} does not match decisions {decided_bits.shape}")

    wrong = truth_bits != decided_bits
    counter.bits += int(wrong.size)
    counter.bit_errors += int(wrong.sum())
    counter.words += int(wrong.shape[0])
    counter.word_errors += int(wrong.any(axis=1).sum())

    if truth_symbols is not None:
        truth_symbols = np.asarray(truth_symbols)
        decided_symbols = np.asarray(decided_symbols)
        if truth_symbols.shape != decided_symbols.shape:
            raise ValueError("Symbol truth and decisions are misaligned")
        counter.symbols += int(truth_symbols.size)
        counter.symbol_errors += int((truth_symbols != decided_symbols).sum())
    return counter
