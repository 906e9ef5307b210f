"""Analytic contact fields sampled on the taxel grid.

Normal pressure follows the Hertz ellipse p ~ sqrt(1 - r^2/a^2). Tangential tractions
use the superposed-Hertz partial-slip form: inside a stick disc of radius c the traction
is mu * p minus a scaled Hertz ellipse of radius c, outside it the traction sits on the
local Coulomb bound (nudged up by ``config.TIE_BREAK_DELTA`` so the annulus reads as
slipping).
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from slipsense.config import config
from slipsense.exceptions import NegativeLoadException, SimulationException, UnresolvedContactException
from slipsense.models import ContactParams, ForceFrame, TaxelGridSpec
from slipsense.taxels import taxel_coordinates
from slipsense.types import Direction, Newtons, NewtonMillimeters

logger = logging.getLogger(__name__)

Field2D = Tuple[np.ndarray, np.ndarray]


def hertz_profile(r: Union[float, np.ndarray], a: float) -> Union[float, np.ndarray]:
    """Unnormalized Hertz profile sqrt(1 - r^2/a^2) inside the disc, 0 outside."""
    r = np.asarray(r, dtype=np.float64)
    inside = r < a
    profile = np.where(inside, np.sqrt(np.clip(1.0 - (r / a) ** 2, 0.0, None)), 0.0)
    return float(profile) if profile.ndim == 0 else profile


def hertz_contact_radius(params: ContactParams, load: Newtons) -> float:
    """Contact radius at ``load`` for the sphere that gives radius ``params.a`` at ``params.P``."""
    if load < 0:
        raise NegativeLoadException(f"Normal load must be non-negative, got {load}")
    return params.a * (load / params.P) ** (1.0 / 3.0)


def _radial_offsets(params: ContactParams, grid: TaxelGridSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, y = taxel_coordinates(grid)
    dx = x - params.center[0]
    dy = y - params.center[1]
    return dx, dy, np.hypot(dx, dy)


def _hertz_weights(params: ContactParams, grid: TaxelGridSpec) -> Tuple[np.ndarray, float]:
    params.check_fits(grid)
    _, _, r = _radial_offsets(params, grid)
    w = hertz_profile(r, params.a)
    total = float(w.sum())
    if total <= 0.0:
        raise UnresolvedContactException(
            f"Contact radius {params.a:.4g} mm covers no taxel centre at pitch {grid.pitch} mm"
        )
    return w, total


def hertz_pressure(params: ContactParams, grid: TaxelGridSpec) -> np.ndarray:
    """Per-taxel normal force of a Hertz contact, normalized to sum to P.

    Raises:
        ContactOutsideGridException: If the disc does not fit within the grid
        UnresolvedContactException: If the disc covers no taxel centre
    """
    w, total = _hertz_weights(params, grid)
    return params.P * w / total


def analytic_stick_fraction(Q: Newtons, mu: float, P: Newtons) -> float:
    """Stick-area fraction (c/a)^2 = (1 - Q/(mu P))^(2/3); 0 once Q exceeds mu P."""
    if Q < 0:
        raise NegativeLoadException(f"Tangential load must be non-negative, got {Q}")
    ratio = Q / (mu * P)
    if ratio >= 1.0:
        return 0.0
    return float((1.0 - ratio) ** (2.0 / 3.0))


def analytic_torsional_stick_fraction(Mz: NewtonMillimeters, M_slip: NewtonMillimeters) -> float:
    """Stick-area fraction sqrt(1 - Mz/M_slip) of the torsional field; 0 beyond M_slip."""
    if Mz < 0:
        raise NegativeLoadException(f"Torque must be non-negative, got {Mz}")
    ratio = Mz / M_slip
    if ratio >= 1.0:
        return 0.0
    return float(np.sqrt(1.0 - ratio))


def _unit_direction(direction: Union[Direction, Sequence[float], np.ndarray]) -> Tuple[float, float]:
    ux, uy = (float(v) for v in direction)
    norm = float(np.hypot(ux, uy))
    if norm == 0.0 or not np.isfinite(norm):
        raise SimulationException(f"Shear direction must be a non-zero finite vector, got {direction}")
    return ux / norm, uy / norm


def cattaneo_mindlin_shear(
    params: ContactParams,
    Q: Newtons,
    direction: Union[Direction, Sequence[float], np.ndarray],
    grid: TaxelGridSpec,
) -> Field2D:
    """Translational partial-slip traction field carrying total shear Q along ``direction``.

    The stick radius is c = a (1 - Q/(mu P))^(1/3). The stick-zone correction amplitude is
    solved on the grid so the taxel sum of shear is exactly Q, then clamped to [0, 1].

    Raises:
        NegativeLoadException: If Q is negative
    """
    if Q < 0:
        raise NegativeLoadException(f"Tangential load must be non-negative, got {Q}")
    ux, uy = _unit_direction(direction)
    w, total = _hertz_weights(params, grid)
    limit = params.mu * params.P * w / total
    delta = config.TIE_BREAK_DELTA

    if Q == 0.0:
        magnitude = np.zeros_like(w)
    elif Q >= params.mu * params.P:
        magnitude = (1.0 + delta) * limit
    else:
        c = params.a * (1.0 - Q / (params.mu * params.P)) ** (1.0 / 3.0)
        _, _, r = _radial_offsets(params, grid)
        stick = (r < c) & (w > 0)
        annulus = (w > 0) & ~stick
        g = np.zeros_like(w)
        g[stick] = np.sqrt(1.0 - (r[stick] / c) ** 2)

        magnitude = np.where(annulus, (1.0 + delta) * limit, limit)
        correction = params.mu * params.P / total * g
        correction_sum = float(correction.sum())
        amplitude = 0.0
        if correction_sum > 0.0:
            amplitude = (float(magnitude.sum()) - Q) / correction_sum
            amplitude = min(max(amplitude, 0.0), 1.0)
        magnitude = magnitude - amplitude * correction

    return magnitude * ux, magnitude * uy


def full_slip_torque(params: ContactParams, grid: TaxelGridSpec) -> NewtonMillimeters:
    """Torque at which every contacting taxel sits on its local Coulomb bound."""
    _, _, r = _radial_offsets(params, grid)
    return float(np.sum(params.mu * hertz_pressure(params, grid) * r))


def _torsional_magnitude(
    c: float, w: np.ndarray, r: np.ndarray, limit: np.ndarray, scale: float, a: float
) -> np.ndarray:
    delta = config.TIE_BREAK_DELTA
    stick = (r < c) & (w > 0)
    magnitude = (1.0 + delta) * limit
    if c > 0.0:
        g = np.sqrt(1.0 - (r[stick] / c) ** 2)
        magnitude[stick] = scale * (w[stick] - (c / a) * g)
    return magnitude


def torsional_stick_radius(params: ContactParams, Mz: NewtonMillimeters, grid: TaxelGridSpec) -> float:
    """Stick-core radius c in [0, a] whose taxel-summed torque equals ``Mz``.

    Returns 0 when ``Mz`` reaches the full-slip torque.
    """
    if Mz < 0:
        raise NegativeLoadException(f"Torque must be non-negative, got {Mz}")
    if Mz == 0.0:
        return params.a
    w, total = _hertz_weights(params, grid)
    _, _, r = _radial_offsets(params, grid)
    scale = params.mu * params.P / total
    limit = scale * w
    if Mz >= float(np.sum(limit * r)):
        return 0.0

    def residual(c: float) -> float:
        return float(np.sum(_torsional_magnitude(c, w, r, limit, scale, params.a) * r)) - Mz

    return float(brentq(residual, 0.0, params.a, xtol=1e-12 * params.a, maxiter=200))


def torsional_partial_slip(params: ContactParams, Mz: NewtonMillimeters, grid: TaxelGridSpec) -> Field2D:
    """Azimuthal traction field whose net moment about the patch centre equals ``Mz``.

    Positive torque turns counter-clockwise. A taxel exactly at the patch centre carries
    no traction.

    Raises:
        NegativeLoadException: If Mz is negative
    """
    if Mz < 0:
        raise NegativeLoadException(f"Torque must be non-negative, got {Mz}")
    w, total = _hertz_weights(params, grid)
    if Mz == 0.0:
        return np.zeros_like(w), np.zeros_like(w)

    dx, dy, r = _radial_offsets(params, grid)
    scale = params.mu * params.P / total
    c = torsional_stick_radius(params, Mz, grid)
    magnitude = _torsional_magnitude(c, w, r, scale * w, scale, params.a)

    safe_r = np.where(r > 0, r, 1.0)
    tangent_x = np.where(r > 0, -dy / safe_r, 0.0)
    tangent_y = np.where(r > 0, dx / safe_r, 0.0)
    logger.debug(f"Torsional field for Mz={Mz:.4g} N*mm has stick radius {c:.4g} mm")
    return magnitude * tangent_x, magnitude * tangent_y


def add_noise(
    frame: ForceFrame,
    sigma: Newtons,
    seed: Union[int, Iterable[int], None] = None,
    rng: Optional[np.random.Generator] = None,
) -> ForceFrame:
    """Add i.i.d. zero-mean Gaussian noise to every component of every taxel.

    Args:
        frame: Frame to perturb
        sigma: Standard deviation in newtons
        seed: Integer or sequence of integers for ``numpy.random.default_rng``
        rng: Generator to draw from instead of seeding a new one

    Returns:
        A new frame; ``frame`` itself when sigma is 0
    """
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return frame
    generator = rng if rng is not None else np.random.default_rng(seed)
    noise = generator.normal(0.0, sigma, size=(3,) + frame.fz.shape)
    return ForceFrame(
        timestamp=frame.timestamp,
        fx=frame.fx + noise[0],
        fy=frame.fy + noise[1],
        fz=frame.fz + noise[2],
    )
