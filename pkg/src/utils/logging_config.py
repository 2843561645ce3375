"""
Logging Configuration Utilities
"""

import copy
import logging
import logging.config
from pathlib import Path
from typing import Optional


def setup_logging(verbose: bool = False, log_file: Optional[Path] = None):
    """Configure the root logger from LOGGING_CONFIG

    verbose lowers the console and root level to DEBUG; log_file replaces
    the default logs/application.log target.
    """
    # Import here to avoid circular dependency
    from ..config.settings import LOGGING_CONFIG, LOGS_DIR

    config = copy.deepcopy(LOGGING_CONFIG)
    if log_file is not None:
        config['handlers']['file']['filename'] = str(log_file)
    Path(config['handlers']['file']['filename']).parent.mkdir(parents=True, exist_ok=True)
    LOGS_DIR.mkdir(parents=True, exist_ok=True)

    if verbose:
        config['handlers']['default']['level'] = 'DEBUG'
        config['loggers']['']['level'] = 'DEBUG'
    logging.config.dictConfig(config)

    logger = logging.getLogger(__name__)
    logger.info("Logging configured successfully")
