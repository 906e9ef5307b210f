"""Data models for the slipsense package.

This module contains all Pydantic models used throughout the slipsense package
for data validation. Per-taxel force fields are read-only float64 numpy arrays.
"""

from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from slipsense.config import config
from slipsense.exceptions import ContactOutsideGridException
from slipsense.types import DetectorKind, PhaseKind


def _as_taxel_field(value: Any) -> np.ndarray:
    """Copy ``value`` into a read-only, finite, square float64 array."""
    field = np.array(value, dtype=np.float64)
    if field.ndim != 2 or field.shape[0] != field.shape[1] or field.shape[0] < 1:
        raise ValueError(f"taxel field must be a non-empty n x n array, got shape {field.shape}")
    if not np.all(np.isfinite(field)):
        raise ValueError("taxel field contains NaN or infinite values")
    field.setflags(write=False)
    return field


# --- Grid and Frame Models ---
class TaxelGridSpec(BaseModel):
    """Geometry of an n x n taxel grid with its origin at the geometric centre."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(default_factory=lambda: config.GRID_N, ge=1, le=65535, description="Taxels per side")
    pitch: float = Field(
        default_factory=lambda: config.TAXEL_PITCH_MM,
        gt=0,
        description="Centre-to-centre taxel spacing in millimeters"
    )

    @property
    def taxel_count(self) -> int:
        return self.n * self.n

    @property
    def side_length(self) -> float:
        return self.n * self.pitch

    @property
    def half_side(self) -> float:
        return 0.5 * self.side_length


class ForceFrame(BaseModel):
    """One timestamped 3 x n x n contact-force distribution (newtons per taxel)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    timestamp: float = Field(..., description="Seconds since the start of the sequence")
    fx: np.ndarray = Field(..., description="Tangential force along x per taxel")
    fy: np.ndarray = Field(..., description="Tangential force along y per taxel")
    fz: np.ndarray = Field(..., description="Normal force per taxel")

    @field_validator("fx", "fy", "fz", mode="before")
    @classmethod
    def _validate_field(cls, value: Any) -> np.ndarray:
        return _as_taxel_field(value)

    @field_validator("timestamp")
    @classmethod
    def _validate_timestamp(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("timestamp must be finite")
        return value

    @model_validator(mode="after")
    def _check_shapes(self) -> "ForceFrame":
        if not (self.fx.shape == self.fy.shape == self.fz.shape):
            raise ValueError(
                f"fx, fy and fz must share one shape, got {self.fx.shape}, {self.fy.shape}, {self.fz.shape}"
            )
        return self

    @property
    def n(self) -> int:
        return self.fz.shape[0]

    @classmethod
    def zeros(cls, n: int, timestamp: float = 0.0) -> "ForceFrame":
        empty = np.zeros((n, n))
        return cls(timestamp=timestamp, fx=empty, fy=empty, fz=empty)

    def scaled(self, factor: float) -> "ForceFrame":
        """Return a copy with every per-taxel force multiplied by ``factor``."""
        return ForceFrame(
            timestamp=self.timestamp,
            fx=self.fx * factor,
            fy=self.fy * factor,
            fz=self.fz * factor,
        )

    def equals(self, other: "ForceFrame") -> bool:
        """Bit-exact comparison of timestamp and all three fields."""
        return (
            self.timestamp == other.timestamp
            and np.array_equal(self.fx, other.fx)
            and np.array_equal(self.fy, other.fy)
            and np.array_equal(self.fz, other.fz)
        )


class AggregateForces(BaseModel):
    """Total normal force, shear components, shear magnitude and net z moment of a frame."""
    model_config = ConfigDict(frozen=True)

    F_N: float = Field(..., description="Total normal force in newtons")
    F_x: float = Field(..., description="Total shear along x in newtons")
    F_y: float = Field(..., description="Total shear along y in newtons")
    F_T: float = Field(..., ge=0, description="Total shear magnitude in newtons")
    M: float = Field(..., description="Net moment about z in newton-millimeters")


# --- Detector Models ---
class SlipState(str, Enum):
    """Per-frame grasp state."""
    STICK = "STICK"
    SLIP = "SLIP"
    NO_CONTACT = "NO_CONTACT"


class DetectorConfig(BaseModel):
    """Tunable parameters shared by both slip detectors."""
    model_config = ConfigDict(frozen=True)

    mu: float = Field(default_factory=lambda: config.FRICTION_COEFFICIENT, gt=0, description="Friction coefficient")
    sr_threshold: float = Field(
        default_factory=lambda: config.SR_THRESHOLD,
        ge=0.0,
        le=1.0,
        description="Stick ratio below which a frame is classified SLIP"
    )
    contact_epsilon: float = Field(
        default_factory=lambda: config.CONTACT_EPSILON_N,
        ge=0.0,
        description="Normal force a taxel must exceed to count as in contact"
    )
    debounce_k: int = Field(
        default_factory=lambda: config.DEBOUNCE_K,
        ge=1,
        description="Consecutive identical raw decisions required to switch state"
    )


class StickRatioResult(BaseModel):
    """Stick count C, contact count A and SR = C / A for one frame."""
    model_config = ConfigDict(frozen=True)

    stick_count: int = Field(..., ge=0)
    contact_count: int = Field(..., ge=0)
    sr: Optional[float] = Field(None, ge=0.0, le=1.0, description="Undefined (None) when contact_count is 0")

    @model_validator(mode="after")
    def _check_counts(self) -> "StickRatioResult":
        if self.stick_count > self.contact_count:
            raise ValueError("stick_count cannot exceed contact_count")
        if self.contact_count == 0 and self.sr is not None:
            raise ValueError("sr is undefined without contact")
        if self.contact_count > 0 and self.sr is None:
            raise ValueError("sr is required when contact_count > 0")
        return self

    @classmethod
    def from_counts(cls, stick_count: int, contact_count: int) -> "StickRatioResult":
        sr = stick_count / contact_count if contact_count > 0 else None
        return cls(stick_count=stick_count, contact_count=contact_count, sr=sr)


class DetectorState(BaseModel):
    """Debounce state owned by a single sequential consumer."""
    model_config = ConfigDict(frozen=True)

    public_state: Optional[SlipState] = None
    candidate: Optional[SlipState] = None
    candidate_count: int = Field(0, ge=0)
    last_timestamp: Optional[float] = None
    frames_seen: int = Field(0, ge=0)


# --- Simulation Models ---
class ContactParams(BaseModel):
    """Hertzian contact patch: radius, normal load, friction and centre offset."""
    model_config = ConfigDict(frozen=True)

    a: float = Field(default_factory=lambda: config.CONTACT_RADIUS_MM, gt=0, description="Contact radius in mm")
    P: float = Field(default_factory=lambda: config.NORMAL_LOAD_N, gt=0, description="Total normal load in N")
    mu: float = Field(default_factory=lambda: config.FRICTION_COEFFICIENT, gt=0, description="Friction coefficient")
    center: Tuple[float, float] = Field((0.0, 0.0), description="Patch centre offset from the grid centre in mm")

    def fits(self, grid: TaxelGridSpec) -> bool:
        return float(np.hypot(*self.center)) + self.a <= grid.half_side

    def check_fits(self, grid: TaxelGridSpec) -> None:
        """Raise ContactOutsideGridException unless the disc lies within the grid."""
        if not self.fits(grid):
            raise ContactOutsideGridException(
                f"Contact disc (radius {self.a} mm, centre {self.center}) does not fit within "
                f"a {grid.side_length} mm grid"
            )


class GripPhase(BaseModel):
    """Linear ramp of the normal load to ``target`` x P (0 releases the object)."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["grip"] = "grip"
    duration: float = Field(default_factory=lambda: config.GRIP_DURATION_S, gt=0)
    target: float = Field(1.0, ge=0.0, description="Normal load at phase end as a fraction of ContactParams.P")


class HoldPhase(BaseModel):
    """Constant loads."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["hold"] = "hold"
    duration: float = Field(default_factory=lambda: config.HOLD_DURATION_S, gt=0)


class TranslatePhase(BaseModel):
    """Tangential load ramped to q_max x mu P, held, then released at phase end."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["translate"] = "translate"
    duration: float = Field(default_factory=lambda: config.MOTION_DURATION_S, gt=0)
    ramp_duration: float = Field(default_factory=lambda: config.RAMP_DURATION_S, gt=0)
    q_max: float = Field(default_factory=lambda: config.TRANSLATE_PEAK_RATIO, gt=1.0)
    direction_deg: float = Field(0.0, description="Load direction, counter-clockwise from +x")

    @model_validator(mode="after")
    def _check_ramp(self) -> "TranslatePhase":
        if self.ramp_duration > self.duration:
            raise ValueError("ramp_duration cannot exceed duration")
        return self


class RotatePhase(BaseModel):
    """Torque ramped to m_max x M_slip, held, then released at phase end."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["rotate"] = "rotate"
    duration: float = Field(default_factory=lambda: config.MOTION_DURATION_S, gt=0)
    ramp_duration: float = Field(default_factory=lambda: config.RAMP_DURATION_S, gt=0)
    m_max: float = Field(default_factory=lambda: config.ROTATE_PEAK_RATIO, gt=1.0)

    @model_validator(mode="after")
    def _check_ramp(self) -> "RotatePhase":
        if self.ramp_duration > self.duration:
            raise ValueError("ramp_duration cannot exceed duration")
        return self


Phase = Annotated[Union[GripPhase, HoldPhase, TranslatePhase, RotatePhase], Field(discriminator="kind")]


class ScenarioSpec(BaseModel):
    """Ordered loading phases plus sampling and noise settings."""
    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    phases: List[Phase] = Field(..., min_length=1)
    frame_rate: float = Field(default_factory=lambda: config.FRAME_RATE_HZ, gt=0)
    noise_sigma: float = Field(default_factory=lambda: config.NOISE_SIGMA_N, ge=0.0)
    sr_threshold_truth: float = Field(default_factory=lambda: config.SR_THRESHOLD, ge=0.0, le=1.0)

    @property
    def total_duration(self) -> float:
        return float(sum(phase.duration for phase in self.phases))


class TruthInterval(BaseModel):
    """Half-open interval [start, end) with a STICK or SLIP label."""
    model_config = ConfigDict(frozen=True)

    start: float
    end: float
    state: SlipState

    @model_validator(mode="after")
    def _check_interval(self) -> "TruthInterval":
        if self.end <= self.start:
            raise ValueError(f"interval end {self.end} must be after start {self.start}")
        if self.state == SlipState.NO_CONTACT:
            raise ValueError("truth intervals are STICK or SLIP")
        return self

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end


class PhaseRecord(BaseModel):
    """Timeline and analytic landmarks of one generated phase."""
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    kind: PhaseKind
    start: float
    end: float
    peak_ratio: Optional[float] = Field(None, description="q_max or m_max for motion phases")
    peak_stick_fraction: Optional[float] = Field(None, description="Analytic stick fraction at peak load")
    slip_onset: Optional[float] = Field(None, description="Time the analytic stick fraction drops below the truth threshold")
    full_slip_onset: Optional[float] = Field(None, description="Time the load reaches the full-slip bound")


class LabeledSequence(BaseModel):
    """Frames plus ground-truth STICK/SLIP intervals over the contact portion."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    grid: TaxelGridSpec
    frame_rate: float = Field(..., gt=0)
    frames: List[ForceFrame] = Field(default_factory=list)
    truth: List[TruthInterval] = Field(default_factory=list)
    phases: List[PhaseRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_sequence(self) -> "LabeledSequence":
        previous = None
        for i, frame in enumerate(self.frames):
            if frame.n != self.grid.n:
                raise ValueError(f"frame {i} is {frame.n}x{frame.n}, grid is {self.grid.n}x{self.grid.n}")
            if previous is not None and frame.timestamp < previous:
                raise ValueError(f"frame {i} timestamp {frame.timestamp} precedes {previous}")
            previous = frame.timestamp
        for before, after in zip(self.truth, self.truth[1:]):
            if after.start < before.end:
                raise ValueError("truth intervals must be ordered and disjoint")
        return self

    def truth_at(self, t: float) -> Optional[SlipState]:
        """Label of the interval containing ``t``, or None outside contact."""
        for interval in self.truth:
            if interval.contains(t):
                return interval.state
            if interval.start > t:
                break
        return None

    def truth_labels(self) -> List[Optional[SlipState]]:
        return [self.truth_at(frame.timestamp) for frame in self.frames]

    def slip_intervals(self) -> List[TruthInterval]:
        return [interval for interval in self.truth if interval.state == SlipState.SLIP]

    def phase_at(self, t: float) -> Optional[PhaseRecord]:
        for phase in self.phases:
            if phase.start <= t < phase.end:
                return phase
        return None


# --- Evaluation Models ---
class ConfusionCounts(BaseModel):
    """Frame counts with SLIP as the positive class."""
    model_config = ConfigDict(frozen=True)

    tp: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    tn: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)
    ignored: int = Field(0, ge=0, description="NO_CONTACT predictions and frames outside any truth interval")

    @property
    def scored(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
            ignored=self.ignored + other.ignored,
        )


class MetricsReport(BaseModel):
    """Accuracy, precision and recall of one detector run; undefined ratios are None."""
    model_config = ConfigDict(frozen=True)

    run_id: str = ""
    detector: DetectorKind
    detector_config: DetectorConfig
    counts: ConfusionCounts
    accuracy: Optional[float] = Field(None, ge=0.0, le=1.0)
    precision: Optional[float] = Field(None, ge=0.0, le=1.0)
    recall: Optional[float] = Field(None, ge=0.0, le=1.0)

    @property
    def scored_frames(self) -> int:
        return self.counts.scored

    @property
    def is_degenerate(self) -> bool:
        return self.counts.scored == 0


# --- Output Models ---
class TraceRecord(BaseModel):
    """Per-frame aggregates, stick ratio and decisions."""
    model_config = ConfigDict(frozen=True)

    timestamp: float
    F_N: float
    F_T: float
    M: float
    sr: Optional[float] = None
    state_baseline: Optional[SlipState] = None
    state_stick_ratio: Optional[SlipState] = None
    truth: Optional[SlipState] = None


class DetectorComparison(BaseModel):
    """Both detectors scored over identical frames, plus the decision trace."""
    model_config = ConfigDict(frozen=True)

    baseline: MetricsReport
    stick_ratio: MetricsReport
    trace: List[TraceRecord]

    def reports(self) -> Dict[str, MetricsReport]:
        return {"baseline": self.baseline, "stick_ratio": self.stick_ratio}


class ProtocolResult(BaseModel):
    """Seeded multi-run evaluation averaged per detector."""
    model_config = ConfigDict(frozen=True)

    scenario: str
    seeds: List[int]
    baseline: MetricsReport
    stick_ratio: MetricsReport
    by_motion: Dict[str, MetricsReport] = Field(
        default_factory=dict,
        description="Averaged reports keyed by '<detector>/<motion>'"
    )
    runs: List[DetectorComparison]

    def reports(self) -> Dict[str, MetricsReport]:
        return {"baseline": self.baseline, "stick_ratio": self.stick_ratio}


class FrameFileHeader(BaseModel):
    """Fixed-size header of a .taxfrm file."""
    model_config = ConfigDict(frozen=True)

    magic: bytes = config.FRAME_FILE_MAGIC
    n: int = Field(..., ge=1, le=65535)
    pitch_mm: float = Field(..., gt=0)
    frame_count: int = Field(..., ge=0, le=2**32 - 1)
    frame_rate_hz: float = Field(..., gt=0)


class BenchResult(BaseModel):
    """Compute-only throughput of the stick-ratio pipeline."""
    model_config = ConfigDict(frozen=True)

    n: int
    frames: int
    repetitions: int
    per_repetition_fps: List[float]
    mean_fps: float
    min_fps: float
