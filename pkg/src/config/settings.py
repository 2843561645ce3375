"""
Application Configuration Settings
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

ENV_PREFIX = 'GEPNET'

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent.parent
DATA_DIR = Path(os.getenv('GEPNET_DATA_DIR', BASE_DIR / 'data'))
LOGS_DIR = Path(os.getenv('GEPNET_LOGS_DIR', BASE_DIR / 'logs'))
CONFIGS_DIR = BASE_DIR / 'configs'

# Application configuration
APP_CONFIG = {
    'log_level': os.getenv('GEPNET_LOG_LEVEL', 'INFO'),
    'default_seed': int(os.getenv('GEPNET_SEED', 20240501)),
    'default_threads': int(os.getenv('GEPNET_THREADS', 1)),
}

# Data configuration
DATA_CONFIG = {
    'results_path': Path(os.getenv('GEPNET_RESULTS_DIR', DATA_DIR / 'results')),
    'archive_path': Path(os.getenv('GEPNET_ARCHIVE_DIR', DATA_DIR / 'archives')),
    'dataset_path': Path(os.getenv('GEPNET_DATASET_DIR', DATA_DIR / 'datasets')),
    'archive_extension': '.gepw',
    'dataset_extension': '.gepd',
    'results_file': 'results.csv',
    'manifest_file': 'manifest.json',
}

# Numerical constants shared by every module
NUMERIC_CONFIG = {
    'var_floor': float(os.getenv('GEPNET_VAR_FLOOR', 1e-8)),
    'llr_clip': float(os.getenv('GEPNET_LLR_CLIP', 30.0)),
    'quadrature_nodes': int(os.getenv('GEPNET_QUADRATURE_NODES', 96)),
    'mu_a_cap': 100.0,
    'noiseless_sigma_w2': 1e-9,
    'map_oracle_cap': 2 ** 20,
}

# Logging configuration
LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'default': {
            'level': APP_CONFIG['log_level'],
            'formatter': 'standard',
            'class': 'logging.StreamHandler',
        },
        'file': {
            'level': 'INFO',
            'formatter': 'standard',
            'class': 'logging.FileHandler',
            'filename': str(LOGS_DIR / 'application.log'),
            'mode': 'a',
        },
    },
    'loggers': {
        '': {
            'handlers': ['default', 'file'],
            'level': APP_CONFIG['log_level'],
            'propagate': False
        }
    }
}
