"""Taxel grid geometry and the aggregate force/moment computations.

Coordinates are in millimeters with the origin at the grid centre; row 0 is the top
edge (largest y) and column 0 the left edge (smallest x).
"""

import logging
from functools import lru_cache
from typing import FrozenSet, Optional, Tuple

import numpy as np

from slipsense.exceptions import FrameDimensionException
from slipsense.models import AggregateForces, ForceFrame, TaxelGridSpec
from slipsense.types import Newtons, NewtonMillimeters, TaxelIndex

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _coordinates(n: int, pitch: float) -> Tuple[np.ndarray, np.ndarray]:
    centre = (n - 1) / 2.0
    idx = np.arange(n, dtype=np.float64)
    x = np.broadcast_to((idx - centre) * pitch, (n, n)).copy()
    y = np.broadcast_to(((centre - idx) * pitch)[:, None], (n, n)).copy()
    x.setflags(write=False)
    y.setflags(write=False)
    return x, y


def taxel_coordinates(grid: TaxelGridSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Return read-only (x, y) coordinate arrays of shape (n, n)."""
    return _coordinates(grid.n, grid.pitch)


def check_dimensions(frame: ForceFrame, grid: Optional[TaxelGridSpec]) -> None:
    """Raise FrameDimensionException when ``frame`` does not match ``grid``."""
    if grid is not None and frame.n != grid.n:
        raise FrameDimensionException(
            f"Frame is {frame.n}x{frame.n} but the grid spec is {grid.n}x{grid.n}"
        )


def total_normal_force(frame: ForceFrame, grid: Optional[TaxelGridSpec] = None) -> Newtons:
    check_dimensions(frame, grid)
    return float(frame.fz.sum())


def total_shear_components(
    frame: ForceFrame, grid: Optional[TaxelGridSpec] = None
) -> Tuple[Newtons, Newtons]:
    check_dimensions(frame, grid)
    return float(frame.fx.sum()), float(frame.fy.sum())


def total_shear_magnitude(F_x: Newtons, F_y: Newtons) -> Newtons:
    return float(np.hypot(F_x, F_y))


def net_moment_z(frame: ForceFrame, grid: TaxelGridSpec) -> NewtonMillimeters:
    """Net moment about z: sum of x * fy - y * fx over all taxels."""
    check_dimensions(frame, grid)
    x, y = taxel_coordinates(grid)
    return float(np.sum(x * frame.fy) - np.sum(y * frame.fx))


def contact_mask(frame: ForceFrame, epsilon: Newtons) -> np.ndarray:
    """Boolean field of taxels whose normal force exceeds ``epsilon``."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    return frame.fz > epsilon


def contact_set(frame: ForceFrame, epsilon: Newtons) -> FrozenSet[TaxelIndex]:
    """(row, col) indices of taxels in contact; its size is the contact count A."""
    rows, cols = np.nonzero(contact_mask(frame, epsilon))
    return frozenset((int(r), int(c)) for r, c in zip(rows, cols))


def aggregate_forces(frame: ForceFrame, grid: TaxelGridSpec) -> AggregateForces:
    """Compute F_N, F_x, F_y, F_T and M in one pass."""
    F_x, F_y = total_shear_components(frame, grid)
    return AggregateForces(
        F_N=total_normal_force(frame),
        F_x=F_x,
        F_y=F_y,
        F_T=total_shear_magnitude(F_x, F_y),
        M=net_moment_z(frame, grid),
    )
