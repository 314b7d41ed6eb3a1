"""
Centralized configuration management.
Loads tolerances, caps and paths from environment variables.
"""

import os
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Centralized configuration management."""

    # Dataset location (edge-list files are user supplied, never downloaded)
    DATA_DIR = os.getenv('DIRRES_DATA_DIR', '')

    # Tolerance pack
    ALGEBRAIC_TOL = float(os.getenv('DIRRES_ALGEBRAIC_TOL', 1e-8))
    STOCHASTIC_SIGMAS = float(os.getenv('DIRRES_STOCHASTIC_SIGMAS', 3.0))
    PIVOT_TOL = float(os.getenv('DIRRES_PIVOT_TOL', 1e-12))
    CONDITION_LIMIT = float(os.getenv('DIRRES_CONDITION_LIMIT', 1e12))
    NONNEG_SLACK = float(os.getenv('DIRRES_NONNEG_SLACK', 1e-10))

    # Work caps
    BRUTE_FORCE_CAP = int(os.getenv('DIRRES_BRUTE_FORCE_CAP', 2_000_000))
    WALK_STEP_CAP = int(os.getenv('DIRRES_WALK_STEP_CAP', 1_000_000_000))
    WALK_BATCH = int(os.getenv('DIRRES_WALK_BATCH', 4096))
    WS_RETRY_FACTOR = int(os.getenv('DIRRES_WS_RETRY_FACTOR', 100))

    # Pairwise sums switch to compensated summation above this vertex count
    COMPENSATED_SUM_ABOVE = int(os.getenv('DIRRES_COMPENSATED_SUM_ABOVE', 500))

    LOG_LEVEL = os.getenv('DIRRES_LOG_LEVEL', 'INFO')

    @classmethod
    def validate(cls) -> bool:
        """
        Validate configuration values.

        Returns:
            bool: True (problems are reported as warnings)
        """
        tolerances = ['ALGEBRAIC_TOL', 'STOCHASTIC_SIGMAS', 'PIVOT_TOL', 'CONDITION_LIMIT']
        bad = [key for key in tolerances if getattr(cls, key) <= 0]
        if bad:
            logger.warning(f"Non-positive tolerance settings: {', '.join(bad)}")

        caps = ['BRUTE_FORCE_CAP', 'WALK_STEP_CAP', 'WALK_BATCH', 'WS_RETRY_FACTOR']
        bad = [key for key in caps if getattr(cls, key) < 1]
        if bad:
            logger.warning(f"Caps below 1 will reject every request: {', '.join(bad)}")

        if cls.DATA_DIR and not os.path.isdir(cls.DATA_DIR):
            logger.warning(f"DIRRES_DATA_DIR does not exist: {cls.DATA_DIR}")

        return True

    @classmethod
    def get_tolerances(cls) -> dict:
        """Get the tolerance pack as dictionary."""
        return {
            'algebraic': cls.ALGEBRAIC_TOL,
            'stochastic_sigmas': cls.STOCHASTIC_SIGMAS,
            'pivot': cls.PIVOT_TOL,
            'condition_limit': cls.CONDITION_LIMIT,
            'nonneg_slack': cls.NONNEG_SLACK,
        }

    @classmethod
    def resolve_data_path(cls, path: str) -> str:
        """
        Resolve a dataset path, falling back to DATA_DIR for bare names.

        Args:
            path: File path as given by the user

        Returns:
            Existing path when one is found, otherwise the input unchanged
        """
        if os.path.exists(path) or not cls.DATA_DIR:
            return path
        candidate = os.path.join(cls.DATA_DIR, path)
        return candidate if os.path.exists(candidate) else path
