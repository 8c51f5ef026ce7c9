import logging
import os
import sys
from datetime import datetime
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def setup_logging(log_dir: Optional[str] = None, level: str = "INFO") -> logging.Logger:
    """Set up logging to the console and, when a log directory is given, to a file."""
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = None
    if log_dir:
        # Create logs directory if it doesn't exist
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        log_file = os.path.join(log_dir, f'analogy_{timestamp}.log')
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    logger = logging.getLogger("src")
    if log_file:
        logger.info(f"Logging initialized. Log file: {log_file}")
    return logger
