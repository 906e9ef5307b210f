"""Compute-only throughput of the stick-ratio pipeline."""

import logging
import time
from typing import Optional, Sequence

import numpy as np

from slipsense.detection import SlipDetector
from slipsense.models import BenchResult, DetectorConfig, ForceFrame

logger = logging.getLogger(__name__)


def benchmark_stick_ratio(
    frames: Sequence[ForceFrame],
    detector_config: Optional[DetectorConfig] = None,
    repetitions: int = 5,
) -> BenchResult:
    """Time the debounced stick-ratio detector over ``frames``, once per repetition.

    Frames must already be in memory; reading is not timed.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")
    if not frames:
        raise ValueError("cannot benchmark an empty frame sequence")

    detector = SlipDetector("stick_ratio", detector_config)
    rates = []
    for _ in range(repetitions):
        detector.reset()
        start = time.perf_counter()
        for frame in frames:
            detector.process(frame)
        elapsed = time.perf_counter() - start
        rates.append(len(frames) / max(elapsed, 1e-9))

    result = BenchResult(
        n=frames[0].n,
        frames=len(frames),
        repetitions=repetitions,
        per_repetition_fps=rates,
        mean_fps=float(np.mean(rates)),
        min_fps=float(np.min(rates)),
    )
    logger.info(f"Stick-ratio throughput at n={result.n}: mean {result.mean_fps:.0f} fps, min {result.min_fps:.0f} fps")
    return result
