"""
Experiment Execution Script
Runs the full training flow and an SNR sweep for one experiment file
"""

import sys
from pathlib import Path
import argparse
import logging
from datetime import datetime

# Add the repository root to path
sys.path.append(str(Path(__file__).parent.parent))

from src.config.experiment import load_experiment_config
from src.cli.runner import ExperimentRunner
from src.utils.exceptions import ConfigError, MissingArchiveError
from src.utils.logging_config import setup_logging


def main():
    """Train (if needed) and sweep every configured detector"""
    parser = argparse.ArgumentParser(description='Run a GEPNet turbo receiver experiment')
    parser.add_argument('--config', '-c', default='configs/desk_scale.yaml',
                        help='Experiment YAML file')
    parser.add_argument('--out-dir', default=None, help='Result directory')
    parser.add_argument('--skip-training', action='store_true',
                        help='Evaluate with the archives named in the config')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose logging')

    args = parser.parse_args()

    setup_logging(verbose=args.verbose)
    logger = logging.getLogger(__name__)
    logger.info(f"Starting experiment from {args.config}")

    try:
        config = load_experiment_config(Path(args.config))
        runner = ExperimentRunner(config, out_dir=args.out_dir)
        start_time = datetime.now()

        learned = [kind for kind in config.detectors if kind.learned]
        if learned and not args.skip_training:
            logger.info("Phase 1: Train the APP model")
            app_path = runner.train_step1()
            logger.info("Phase 2: Label samples with masked APP inferences")
            labels_path = runner.generate_labels(app_path)
            logger.info("Phase 3: Train the EXT model")
            ext_path = runner.train_step3(labels_path, app_path)
            config.gepnet['app_archive'] = str(app_path)
            config.gepnet['ext_archive'] = str(ext_path)

        logger.info("Phase 4: Sweep")
        frame = runner.evaluate()
        results_path = runner.write_results(frame)
        runner.write_manifest('sweep', {'results': str(results_path)})
        duration = (datetime.now() - start_time).total_seconds()

        logger.info(f"Experiment completed in {duration:.2f} seconds")
        print("Experiment completed successfully!")
        print(f"Duration: {duration:.2f} seconds")
        print(f"Words simulated: {runner.stats['words_simulated']}")
        print(f"Results: {results_path}")

    except (ConfigError, MissingArchiveError) as e:
        logger.error(f"Experiment could not start: {e}")
        print(f"Experiment could not start: {e}")
        sys.exit(2 if isinstance(e, ConfigError) else 3)
    except Exception as e:
        logger.error(f"Experiment failed: {e}")
        print(f"Experiment failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
