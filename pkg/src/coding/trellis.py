"""
Binary Trellis Construction
States hold the previous K-1 register bits with the most recent input in
the most significant position. Generators are octal with the MSB tapping
the current input.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np


def _parity(value: int) -> int:
    return bin(value).count('1') & 1


def octal_to_int(generator) -> int:
    """Read a generator given in octal notation (int digits or string)"""
    return int(str(generator), 8)


@dataclass(frozen=True, eq=False)
class Trellis:
    """Rate-1/n binary trellis

    next_state[s, u], outputs[s, u, :] and tail_input[s], the input that
    drives state s one step toward zero.
    """
    n_states: int
    n_outputs: int
    memory: int
    next_state: np.ndarray
    outputs: np.ndarray
    tail_input: np.ndarray
    prev_state: np.ndarray
    prev_input: np.ndarray

    @property
    def tail_length(self) -> int:
        return self.memory


def _assemble(next_state: np.ndarray, outputs: np.ndarray, tail_input: np.ndarray,
              memory: int) -> Trellis:
    n_states = next_state.shape[0]
    prev_state = np.zeros((n_states, 2), dtype=np.int64)
    prev_input = np.zeros((n_states, 2), dtype=np.int64)
    fill = np.zeros(n_states, dtype=np.int64)
    for state in range(n_states):
        for bit in (0, 1):
            target = next_state[state, bit]
            prev_state[target, fill[target]] = state
            prev_input[target, fill[target]] = bit
            fill[target] += 1
    if np.any(fill != 2):
        raise ValueError("Trellis is not a regular two-predecessor graph")
    for array in (next_state, outputs, tail_input, prev_state, prev_input):
        array.setflags(write=False)
    return Trellis(n_states, outputs.shape[2], memory, next_state, outputs,
                   tail_input, prev_state, prev_input)


@lru_cache(maxsize=None)
def feedforward_trellis(generators: Tuple[int, ...], constraint_length: int) -> Trellis:
    """Non-recursive code; tail inputs are zeros"""
    memory = constraint_length - 1
    taps = [octal_to_int(g) for g in generators]
    n_states = 1 << memory
    next_state = np.zeros((n_states, 2), dtype=np.int64)
    outputs = np.zeros((n_states, 2, len(taps)), dtype=np.int8)
    for state in range(n_states):
        for bit in (0, 1):
            register = (bit << memory) | state
            next_state[state, bit] = register >> 1
            outputs[state, bit] = [_parity(tap & register) for tap in taps]
    return _assemble(next_state, outputs, np.zeros(n_states, dtype=np.int64), memory)


@lru_cache(maxsize=None)
def recursive_trellis(feedback, feedforward, constraint_length: int) -> Trellis:
    """Recursive systematic code with outputs (systematic, parity)"""
    memory = constraint_length - 1
    fb = octal_to_int(feedback)
    ff = octal_to_int(feedforward)
    low_taps = fb & ((1 << memory) - 1)
    n_states = 1 << memory
    next_state = np.zeros((n_states, 2), dtype=np.int64)
    outputs = np.zeros((n_states, 2, 2), dtype=np.int8)
    tail_input = np.zeros(n_states, dtype=np.int64)
    for state in range(n_states):
        feedback_bit = _parity(low_taps & state)
        tail_input[state] = feedback_bit
        for bit in (0, 1):
            a = bit ^ feedback_bit
            register = (a << memory) | state
            next_state[state, bit] = register >> 1
            outputs[state, bit] = [bit, _parity(ff & register)]
    return _assemble(next_state, outputs, tail_input, memory)


def encode_trellis(trellis: Trellis, message: np.ndarray, terminate: bool = True
                   ) -> Tuple[np.ndarray, np.ndarray, int]:
    """Walk the trellis; returns (inputs incl. tail, outputs (steps, n), final state)"""
    message = np.asarray(message, dtype=np.int64)
    steps = message.size + (trellis.tail_length if terminate else 0)
    inputs = np.zeros(steps, dtype=np.int8)
    coded = np.zeros((steps, trellis.n_outputs), dtype=np.int8)
    state = 0
    for t in range(steps):
        bit = int(message[t]) if t < message.size else int(trellis.tail_input[state])
        inputs[t] = bit
        coded[t] = trellis.outputs[state, bit]
        state = int(trellis.next_state[state, bit])
    return inputs, coded, state
