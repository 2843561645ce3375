"""
GEPNet Lab Setup Script
Description: Directory layout, environment file, requirements and a smoke check
"""

import os
import sys
import subprocess
import logging
from pathlib import Path
import argparse

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler('setup.log'),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)


def install_requirements():
    """Install Python requirements"""
    logger.info("Installing Python requirements...")

    try:
        subprocess.check_call([
            sys.executable, "-m", "pip", "install", "-r", "requirements.txt"
        ])
        logger.info("Requirements installed successfully")
        return True
    except subprocess.CalledProcessError as e:
        logger.error(f"Error installing requirements: {e}")
        return False


def create_environment_file():
    """Create .env from .env.example"""
    if os.path.exists('.env'):
        logger.info(".env file already exists")
        return True
    if not os.path.exists('.env.example'):
        logger.warning(".env.example not found; skipping")
        return True
    Path('.env').write_text(Path('.env.example').read_text())
    logger.info("Created .env file - adjust paths and seeds as needed")
    return True


def setup_directory_structure():
    """Create necessary directories"""
    directories = [
        'data/results',
        'data/archives',
        'data/datasets',
        'logs',
    ]

    for directory in directories:
        Path(directory).mkdir(parents=True, exist_ok=True)

    logger.info("Directory structure created")
    return True


def run_verification():
    """Run the numerical smoke checks"""
    logger.info("Running setup verification...")
    try:
        subprocess.check_call([sys.executable, "scripts/verify_system.py"])
        return True
    except subprocess.CalledProcessError as e:
        logger.error(f"Setup verification failed: {e}")
        return False


def main():
    """Main setup function"""
    parser = argparse.ArgumentParser(description='GEPNet Lab Setup')
    parser.add_argument('--skip-install', action='store_true',
                        help='Skip installing requirements')
    parser.add_argument('--test-only', action='store_true',
                        help='Only run verification checks')

    args = parser.parse_args()

    logger.info("Starting GEPNet lab setup...")

    if args.test_only:
        sys.exit(0 if run_verification() else 1)

    steps = [
        ("Creating directory structure", setup_directory_structure),
        ("Creating environment file", create_environment_file),
    ]
    if not args.skip_install:
        steps.append(("Installing requirements", install_requirements))
    steps.append(("Running verification", run_verification))

    for step_name, step_function in steps:
        logger.info(f"Step: {step_name}")
        try:
            if not step_function():
                logger.error(f"Setup failed at step: {step_name}")
                sys.exit(1)
        except Exception as e:
            logger.error(f"Setup failed at step {step_name}: {e}")
            sys.exit(1)

    logger.info("GEPNet lab setup completed successfully!")
    logger.info("Next steps:")
    logger.info("1. Run: python -m src.cli.main complexity --table")
    logger.info("2. Run: python -m src.cli.main --config configs/desk_scale.yaml sweep")
    logger.info("3. Run: python scripts/run_experiment.py -c configs/desk_scale.yaml")


if __name__ == "__main__":
    main()
