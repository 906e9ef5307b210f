"""Scenario presets and labeled frame-sequence generation.

A scenario is an ordered list of loading phases. Frames are sampled at
``k / frame_rate`` for every ``k`` with a timestamp before the end of the last phase.
Ground truth is analytic: a frame is SLIP when the infinite-resolution stick fraction
falls below ``sr_threshold_truth``.
"""

import bisect
import logging
import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from slipsense.config import config
from slipsense.contact import (
    add_noise,
    analytic_stick_fraction,
    analytic_torsional_stick_fraction,
    cattaneo_mindlin_shear,
    full_slip_torque,
    hertz_contact_radius,
    hertz_pressure,
    torsional_partial_slip,
)
from slipsense.exceptions import InvalidScenarioException, UnknownPresetException, UnresolvedContactException
from slipsense.models import (
    ContactParams,
    ForceFrame,
    GripPhase,
    HoldPhase,
    LabeledSequence,
    Phase,
    PhaseRecord,
    RotatePhase,
    ScenarioSpec,
    SlipState,
    TaxelGridSpec,
    TranslatePhase,
    TruthInterval,
)
from slipsense.types import LoadState, ProgressCallback

logger = logging.getLogger(__name__)


# --- Timeline ---
class ScenarioTimeline:
    """Phase boundaries and the piecewise-linear loads of a scenario."""

    def __init__(self, spec: ScenarioSpec, params: ContactParams):
        self.spec = spec
        self.params = params
        self.starts: List[float] = []
        self.ends: List[float] = []
        self.load_before: List[float] = []
        self.load_after: List[float] = []

        t = 0.0
        load = 0.0
        for phase in spec.phases:
            self.starts.append(t)
            t += phase.duration
            self.ends.append(t)
            self.load_before.append(load)
            if isinstance(phase, GripPhase):
                load = phase.target * params.P
            self.load_after.append(load)

    @property
    def duration(self) -> float:
        return self.ends[-1]

    def phase_index(self, t: float) -> int:
        index = bisect.bisect_right(self.starts, t) - 1
        return min(max(index, 0), len(self.starts) - 1)

    def load_at(self, t: float) -> LoadState:
        """External loads at time ``t``."""
        i = self.phase_index(t)
        phase = self.spec.phases[i]
        elapsed = t - self.starts[i]
        normal = self.load_before[i]
        shear = 0.0
        direction = 0.0
        torque_ratio = 0.0

        if isinstance(phase, GripPhase):
            fraction = min(max(elapsed / phase.duration, 0.0), 1.0)
            normal = self.load_before[i] + (self.load_after[i] - self.load_before[i]) * fraction
        elif isinstance(phase, TranslatePhase):
            ramp = min(max(elapsed / phase.ramp_duration, 0.0), 1.0)
            shear = ramp * phase.q_max * self.params.mu * normal
            direction = phase.direction_deg
        elif isinstance(phase, RotatePhase):
            ramp = min(max(elapsed / phase.ramp_duration, 0.0), 1.0)
            torque_ratio = ramp * phase.m_max

        return LoadState(
            phase_index=i,
            normal_load=normal,
            shear_load=shear,
            direction_deg=direction,
            torque_ratio=torque_ratio,
        )

    def _onset_ratio(self, phase: Phase) -> Optional[float]:
        """Load ratio at which the analytic stick fraction reaches the truth threshold."""
        threshold = self.spec.sr_threshold_truth
        if threshold <= 0.0:
            return None
        if isinstance(phase, TranslatePhase):
            return 1.0 - threshold ** 1.5
        return 1.0 - threshold ** 2

    def phase_records(self) -> List[PhaseRecord]:
        records = []
        for i, phase in enumerate(self.spec.phases):
            start, end = self.starts[i], self.ends[i]
            in_contact = self.load_before[i] > 0 or self.load_after[i] > 0
            record: Dict[str, Any] = dict(index=i, kind=phase.kind, start=start, end=end)
            if isinstance(phase, (TranslatePhase, RotatePhase)):
                peak = phase.q_max if isinstance(phase, TranslatePhase) else phase.m_max
                onset = self._onset_ratio(phase)
                if isinstance(phase, TranslatePhase):
                    peak_fraction = analytic_stick_fraction(peak, 1.0, 1.0)
                else:
                    peak_fraction = analytic_torsional_stick_fraction(peak, 1.0)
                record.update(
                    peak_ratio=peak,
                    peak_stick_fraction=peak_fraction,
                    slip_onset=start + phase.ramp_duration * onset / peak if onset is not None else None,
                    full_slip_onset=start + phase.ramp_duration / peak,
                )
            elif in_contact:
                record.update(peak_stick_fraction=1.0)
            records.append(PhaseRecord(**record))
        return records

    def truth_intervals(self) -> List[TruthInterval]:
        """Ordered, merged STICK/SLIP intervals over the contact portion."""
        pieces = []
        for record, before, after in zip(self.phase_records(), self.load_before, self.load_after):
            if before <= 0 and after <= 0:
                continue
            if record.slip_onset is None:
                pieces.append((record.start, record.end, SlipState.STICK))
                continue
            if record.slip_onset > record.start:
                pieces.append((record.start, record.slip_onset, SlipState.STICK))
            pieces.append((max(record.slip_onset, record.start), record.end, SlipState.SLIP))

        merged: List[List[Any]] = []
        for start, end, state in pieces:
            if merged and merged[-1][2] == state and merged[-1][1] == start:
                merged[-1][1] = end
            else:
                merged.append([start, end, state])
        return [TruthInterval(start=s, end=e, state=state) for s, e, state in merged]


# --- Frame rendering ---
def render_frame(params: ContactParams, grid: TaxelGridSpec, load: LoadState, timestamp: float) -> ForceFrame:
    """Noise-free frame for the given loads; the patch radius follows Hertz scaling with load."""
    normal = load["normal_load"]
    if normal <= 0:
        return ForceFrame.zeros(grid.n, timestamp)

    patch = params.model_copy(update={"P": normal, "a": hertz_contact_radius(params, normal)})
    try:
        fz = hertz_pressure(patch, grid)
    except UnresolvedContactException:
        logger.debug(f"Patch at {normal:.4g} N resolves no taxel at t={timestamp:.4f}s")
        return ForceFrame.zeros(grid.n, timestamp)

    fx = fy = np.zeros_like(fz)
    if load["shear_load"] > 0:
        angle = math.radians(load["direction_deg"])
        fx, fy = cattaneo_mindlin_shear(patch, load["shear_load"], (math.cos(angle), math.sin(angle)), grid)
    elif load["torque_ratio"] > 0:
        torque = load["torque_ratio"] * full_slip_torque(patch, grid)
        fx, fy = torsional_partial_slip(patch, torque, grid)
    return ForceFrame(timestamp=timestamp, fx=fx, fy=fy, fz=fz)


def frame_count(spec: ScenarioSpec) -> int:
    """Number of frames with timestamp k / frame_rate before the scenario end."""
    return int(math.ceil(spec.total_duration * spec.frame_rate - 1e-9))


def _check_spec(spec: ScenarioSpec, params: ContactParams, grid: TaxelGridSpec) -> None:
    # The patch is widest at the strongest grip, which may exceed P.
    peak = max([1.0] + [phase.target for phase in spec.phases if isinstance(phase, GripPhase)])
    params.model_copy(update={"a": hertz_contact_radius(params, peak * params.P)}).check_fits(grid)
    load = 0.0
    for i, phase in enumerate(spec.phases):
        if isinstance(phase, GripPhase):
            load = phase.target * params.P
        elif isinstance(phase, (TranslatePhase, RotatePhase)) and load <= 0:
            raise InvalidScenarioException(
                f"Phase {i} ({phase.kind}) applies a tangential load without normal load; add a grip phase first"
            )


def generate_scenario(
    spec: ScenarioSpec,
    params: ContactParams,
    grid: TaxelGridSpec,
    seed: int,
    progress_callback: Optional[ProgressCallback] = None,
) -> LabeledSequence:
    """Sample a labeled frame sequence for ``spec``.

    Frame ``k`` gets noise from ``default_rng([seed, k])``, so identical
    (spec, params, grid, seed) always produce identical sequences.

    Raises:
        InvalidScenarioException: If the scenario cannot be generated
        ContactOutsideGridException: If the contact disc does not fit within the grid
    """
    if seed < 0:
        raise InvalidScenarioException(f"Seed must be non-negative, got {seed}")
    _check_spec(spec, params, grid)

    timeline = ScenarioTimeline(spec, params)
    count = frame_count(spec)
    frames = []
    report_every = max(count // 10, 1)
    for k in range(count):
        t = k / spec.frame_rate
        frame = render_frame(params, grid, timeline.load_at(t), t)
        if spec.noise_sigma > 0:
            frame = add_noise(frame, spec.noise_sigma, seed=[seed, k])
        frames.append(frame)
        if progress_callback and ((k + 1) % report_every == 0 or k + 1 == count):
            progress_callback(f"Generated {k + 1}/{count} frames")

    sequence = LabeledSequence(
        name=spec.name,
        grid=grid,
        frame_rate=spec.frame_rate,
        frames=frames,
        truth=timeline.truth_intervals(),
        phases=timeline.phase_records(),
    )
    logger.info(
        f"Generated scenario '{spec.name}' (seed {seed}): {count} frames of {grid.taxel_count} taxels, "
        f"{len(sequence.slip_intervals())} slip intervals"
    )
    return sequence


def build_scenario_spec(data: Dict[str, Any]) -> ScenarioSpec:
    """Validate a scenario description loaded from JSON.

    Raises:
        InvalidScenarioException: If ``data`` is not a valid scenario
    """
    try:
        return ScenarioSpec.model_validate(data)
    except ValidationError as e:
        raise InvalidScenarioException(f"Invalid scenario description: {e}") from e


# --- Presets ---
def _displacement_pattern(motions: List[Phase]) -> List[Phase]:
    phases: List[Phase] = [GripPhase(), HoldPhase(duration=config.GRIP_DURATION_S)]
    for motion in motions:
        phases.extend([motion, HoldPhase()])
    return phases


def _ttrtt() -> List[Phase]:
    return _displacement_pattern([
        TranslatePhase(direction_deg=0.0),
        TranslatePhase(direction_deg=180.0),
        RotatePhase(),
        TranslatePhase(direction_deg=90.0),
        TranslatePhase(direction_deg=270.0),
    ])


def _translate_only() -> List[Phase]:
    return _displacement_pattern([TranslatePhase()])


def _rotate_only() -> List[Phase]:
    return _displacement_pattern([RotatePhase()])


def _hold_only() -> List[Phase]:
    return [GripPhase(), HoldPhase(duration=2.0 * config.HOLD_DURATION_S)]


PRESETS: Dict[str, Callable[[], List[Phase]]] = {
    "ttrtt": _ttrtt,
    "translate-only": _translate_only,
    "rotate-only": _rotate_only,
    "hold-only": _hold_only,
}


def register_preset(name: str, builder: Callable[[], List[Phase]]) -> None:
    PRESETS[name] = builder


def list_presets() -> List[str]:
    return sorted(PRESETS)


def get_preset(
    name: str,
    frame_rate: Optional[float] = None,
    noise_sigma: Optional[float] = None,
    sr_threshold_truth: Optional[float] = None,
) -> ScenarioSpec:
    """Build the named preset, overriding sampling settings when given.

    Raises:
        UnknownPresetException: If ``name`` is not registered
    """
    if name not in PRESETS:
        raise UnknownPresetException(f"Unknown scenario '{name}'. Available presets: {list_presets()}")
    overrides = {
        key: value
        for key, value in dict(
            frame_rate=frame_rate,
            noise_sigma=noise_sigma,
            sr_threshold_truth=sr_threshold_truth,
        ).items()
        if value is not None
    }
    return ScenarioSpec(name=name, phases=PRESETS[name](), **overrides)
