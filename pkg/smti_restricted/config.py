"""Default parameters and logging setup for the command line."""
import logging
import os
from dataclasses import dataclass
from typing import Optional

LOG_LEVEL_ENV = "SMTI_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class SearchDefaults:
    bench_k_max: int = 10
    edge_density: float = 0.7
    tie_probability: float = 0.3
    one_in_three_retries: int = 1000
    # None means the thread pool's own size
    fpt_batch_size: Optional[int] = None


DEFAULTS = SearchDefaults()


def log_level(verbosity: int = 0) -> int:
    """WARNING by default, INFO for ``-v`` and DEBUG for ``-vv``; the environment wins when set."""
    configured = os.environ.get(LOG_LEVEL_ENV)
    if configured:
        level = logging.getLevelName(configured.strip().upper())
        if isinstance(level, int):
            return level
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    return logging.WARNING


def configure_logging(verbosity: int = 0) -> None:
    logging.basicConfig(level=log_level(verbosity), format=LOG_FORMAT, force=True)
