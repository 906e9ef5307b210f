"""Common type definitions for the slipsense package.

This module contains type aliases and custom types used throughout the slipsense package
for better type hints and code clarity.
"""

from typing import Callable, Literal, Tuple, TypedDict

# Type aliases for clarity
Newtons = float
NewtonMillimeters = float
Millimeters = float
Seconds = float
Hertz = float
TaxelIndex = Tuple[int, int]
Direction = Tuple[float, float]

# Literal types for constrained values
DetectorKind = Literal["baseline", "stick_ratio"]
PhaseKind = Literal["grip", "translate", "rotate", "hold"]
MotionKind = Literal["translate", "rotate"]

DETECTOR_KINDS: Tuple[DetectorKind, ...] = ("baseline", "stick_ratio")


class LoadState(TypedDict):
    """External loads applied to the contact at one instant."""
    phase_index: int
    normal_load: Newtons
    shear_load: Newtons
    direction_deg: float
    torque_ratio: float


ProgressCallback = Callable[[str], None]
