"""
CLI Module
Experiment driver and complexity calculator
"""

from .complexity import ALGORITHMS, ComplexityQuery, complexity_rvm, complexity_split, complexity_table
from .runner import ExperimentRunner

__all__ = [
    'ALGORITHMS',
    'ComplexityQuery',
    'complexity_rvm',
    'complexity_split',
    'complexity_table',
    'ExperimentRunner'
]
