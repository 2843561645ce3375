"""
Configuration Module
Contains process settings and experiment configuration
"""

from .settings import APP_CONFIG, DATA_CONFIG, NUMERIC_CONFIG, LOGGING_CONFIG

__all__ = [
    'APP_CONFIG',
    'DATA_CONFIG',
    'NUMERIC_CONFIG',
    'LOGGING_CONFIG'
]
