import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger():
    # Configure logger
    logger = logging.getLogger('ninfty')
    logger.setLevel(os.getenv('NINFTY_LOG_LEVEL', 'WARNING').upper())
    logger.propagate = False

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    # stdout is reserved for JSON output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # Add file handler for persistent logs
    log_file = os.getenv('NINFTY_LOG_FILE')
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_verbosity(verbose: int) -> None:
    """Raise the log level for -v (INFO) and -vv (DEBUG)."""
    if verbose >= 2:
        logger.setLevel(logging.DEBUG)
    elif verbose == 1:
        logger.setLevel(logging.INFO)


# Create and configure logger
logger = setup_logger()
