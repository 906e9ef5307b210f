"""Configuration module for the slipsense package.

This module centralizes all configuration settings used throughout the slipsense package.
Settings can be overridden via environment variables or a local ``.env`` file.
"""

import os
from typing import List

from dotenv import load_dotenv

from slipsense.exceptions import InvalidConfigurationException

load_dotenv()


class Config:
    """Central configuration class for the slipsense package."""

    # Taxel Grid
    GRID_N: int = int(os.getenv("GRID_N", "20"))
    TAXEL_PITCH_MM: float = float(os.getenv("TAXEL_PITCH_MM", "1.5"))

    # Contact Defaults
    CONTACT_RADIUS_MM: float = float(os.getenv("CONTACT_RADIUS_MM", "10.5"))
    NORMAL_LOAD_N: float = float(os.getenv("NORMAL_LOAD_N", "10.0"))
    FRICTION_COEFFICIENT: float = float(os.getenv("FRICTION_COEFFICIENT", "0.45"))

    # Detector Defaults
    SR_THRESHOLD: float = float(os.getenv("SR_THRESHOLD", "0.5"))
    CONTACT_EPSILON_N: float = float(os.getenv("CONTACT_EPSILON_N", "1e-3"))
    DEBOUNCE_K: int = int(os.getenv("DEBOUNCE_K", "1"))

    # Simulation
    FRAME_RATE_HZ: float = float(os.getenv("FRAME_RATE_HZ", "240"))
    NOISE_SIGMA_N: float = float(os.getenv("NOISE_SIGMA_N", "0.005"))
    TIE_BREAK_DELTA: float = float(os.getenv("TIE_BREAK_DELTA", "1e-6"))
    GRIP_DURATION_S: float = float(os.getenv("GRIP_DURATION_S", "0.5"))
    HOLD_DURATION_S: float = float(os.getenv("HOLD_DURATION_S", "1.0"))
    MOTION_DURATION_S: float = float(os.getenv("MOTION_DURATION_S", "2.0"))
    RAMP_DURATION_S: float = float(os.getenv("RAMP_DURATION_S", "1.0"))
    TRANSLATE_PEAK_RATIO: float = float(os.getenv("TRANSLATE_PEAK_RATIO", "2.5"))
    ROTATE_PEAK_RATIO: float = float(os.getenv("ROTATE_PEAK_RATIO", "2.5"))
    DEFAULT_SCENARIO: str = os.getenv("DEFAULT_SCENARIO", "ttrtt")

    # Evaluation
    EVAL_SEEDS: str = os.getenv("EVAL_SEEDS", "0,1,2")

    # Benchmark
    BENCH_REPETITIONS: int = int(os.getenv("BENCH_REPETITIONS", "5"))
    REALTIME_MIN_HZ: float = float(os.getenv("REALTIME_MIN_HZ", "50"))

    # Frame Files
    FRAME_FILE_MAGIC: bytes = b"TAXFRM01"
    FRAME_FILE_SUFFIX: str = ".taxfrm"
    LABELS_SUFFIX: str = ".labels"

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @classmethod
    def eval_seeds(cls) -> List[int]:
        """Parse ``EVAL_SEEDS`` into a list of integer seeds."""
        try:
            return [int(s) for s in cls.EVAL_SEEDS.split(",") if s.strip()]
        except ValueError as e:
            raise InvalidConfigurationException(
                f"EVAL_SEEDS must be a comma-separated list of integers, got '{cls.EVAL_SEEDS}'"
            ) from e

    @classmethod
    def validate(cls) -> None:
        """Validate the configuration settings.

        Raises:
            InvalidConfigurationException: If any setting is out of range.
        """
        if cls.GRID_N < 1:
            raise InvalidConfigurationException("GRID_N must be at least 1")

        if cls.TAXEL_PITCH_MM <= 0:
            raise InvalidConfigurationException("TAXEL_PITCH_MM must be positive")

        if cls.CONTACT_RADIUS_MM <= 0 or cls.NORMAL_LOAD_N <= 0:
            raise InvalidConfigurationException("CONTACT_RADIUS_MM and NORMAL_LOAD_N must be positive")

        if cls.FRICTION_COEFFICIENT <= 0:
            raise InvalidConfigurationException("FRICTION_COEFFICIENT must be positive")

        if not 0.0 <= cls.SR_THRESHOLD <= 1.0:
            raise InvalidConfigurationException("SR_THRESHOLD must be between 0 and 1")

        if cls.CONTACT_EPSILON_N < 0:
            raise InvalidConfigurationException("CONTACT_EPSILON_N must be non-negative")

        if cls.DEBOUNCE_K < 1:
            raise InvalidConfigurationException("DEBOUNCE_K must be at least 1")

        if cls.FRAME_RATE_HZ <= 0:
            raise InvalidConfigurationException("FRAME_RATE_HZ must be positive")

        if cls.NOISE_SIGMA_N < 0:
            raise InvalidConfigurationException("NOISE_SIGMA_N must be non-negative")

        if cls.RAMP_DURATION_S <= 0 or cls.RAMP_DURATION_S > cls.MOTION_DURATION_S:
            raise InvalidConfigurationException(
                "RAMP_DURATION_S must be positive and no longer than MOTION_DURATION_S"
            )

        if cls.TRANSLATE_PEAK_RATIO <= 1 or cls.ROTATE_PEAK_RATIO <= 1:
            raise InvalidConfigurationException("Peak load ratios must exceed 1 to force gross slip")

        if cls.BENCH_REPETITIONS < 1:
            raise InvalidConfigurationException("BENCH_REPETITIONS must be at least 1")

        cls.eval_seeds()


# Create a singleton instance
config = Config()
