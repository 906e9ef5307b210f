"""Slip classifiers and the debounced per-frame decision state machine.

Two classifiers are registered by default:

* ``baseline``: total-force Coulomb test, SLIP when F_T > mu * F_N.
* ``stick_ratio``: fraction of contacting taxels that satisfy the local Coulomb
  bound, SLIP when the fraction falls below ``sr_threshold``.

Both emit NO_CONTACT when no taxel exceeds ``contact_epsilon``.
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from slipsense.exceptions import TimestampRegressionException, UnknownDetectorException
from slipsense.models import DetectorConfig, DetectorState, ForceFrame, SlipState, StickRatioResult
from slipsense.taxels import contact_mask, total_normal_force, total_shear_components, total_shear_magnitude
from slipsense.types import DetectorKind

logger = logging.getLogger(__name__)


def coulomb_baseline_classify(frame: ForceFrame, config: DetectorConfig) -> SlipState:
    """Classify a frame with the total-force Coulomb condition F_T > mu * F_N."""
    if not contact_mask(frame, config.contact_epsilon).any():
        return SlipState.NO_CONTACT
    F_x, F_y = total_shear_components(frame)
    F_T = total_shear_magnitude(F_x, F_y)
    F_N = total_normal_force(frame)
    return SlipState.SLIP if F_T > config.mu * F_N else SlipState.STICK


def stick_ratio(frame: ForceFrame, config: DetectorConfig) -> StickRatioResult:
    """Count contacting taxels (A) and those within the local Coulomb bound (C).

    Equality f_T == mu * f_z counts as stick.
    """
    in_contact = contact_mask(frame, config.contact_epsilon)
    contact_count = int(np.count_nonzero(in_contact))
    if contact_count == 0:
        return StickRatioResult(stick_count=0, contact_count=0, sr=None)
    f_t = np.hypot(frame.fx, frame.fy)
    sticking = in_contact & (f_t <= config.mu * frame.fz)
    return StickRatioResult.from_counts(int(np.count_nonzero(sticking)), contact_count)


def stick_ratio_classify(result: StickRatioResult, config: DetectorConfig) -> SlipState:
    if result.contact_count == 0:
        return SlipState.NO_CONTACT
    return SlipState.SLIP if result.sr < config.sr_threshold else SlipState.STICK


# --- Classifier registry ---
class SlipClassifier(ABC):
    """Abstract base class for raw (undebounced) per-frame classifiers."""

    kind: DetectorKind

    @abstractmethod
    def classify(self, frame: ForceFrame, config: DetectorConfig) -> SlipState:
        """Classify a single frame."""
        pass


class CoulombBaselineClassifier(SlipClassifier):
    kind: DetectorKind = "baseline"

    def classify(self, frame: ForceFrame, config: DetectorConfig) -> SlipState:
        return coulomb_baseline_classify(frame, config)


class StickRatioClassifier(SlipClassifier):
    kind: DetectorKind = "stick_ratio"

    def classify(self, frame: ForceFrame, config: DetectorConfig) -> SlipState:
        return stick_ratio_classify(stick_ratio(frame, config), config)


class ClassifierRegistry:
    """Maps detector kinds to classifier instances."""

    def __init__(self):
        self.classifiers: Dict[str, SlipClassifier] = {}
        self._register_default_classifiers()

    def _register_default_classifiers(self):
        for classifier in (CoulombBaselineClassifier(), StickRatioClassifier()):
            self.register(classifier.kind, classifier)

    def register(self, kind: str, classifier: SlipClassifier):
        """Register a custom classifier under ``kind``.

        Args:
            kind: Name the classifier is looked up by
            classifier: The classifier instance
        """
        self.classifiers[kind] = classifier

    def get(self, kind: str) -> SlipClassifier:
        """Look up a classifier.

        Raises:
            UnknownDetectorException: If ``kind`` is not registered
        """
        if kind not in self.classifiers:
            raise UnknownDetectorException(
                f"Detector '{kind}' is not supported. Supported detectors: {list(self.classifiers)}"
            )
        return self.classifiers[kind]

    def get_supported_kinds(self) -> List[str]:
        return list(self.classifiers)


_registry = ClassifierRegistry()


def get_classifier(kind: str) -> SlipClassifier:
    return _registry.get(kind)


def register_classifier(kind: str, classifier: SlipClassifier) -> None:
    _registry.register(kind, classifier)


def get_supported_detectors() -> List[str]:
    return _registry.get_supported_kinds()


def classify_frame(frame: ForceFrame, config: DetectorConfig, kind: DetectorKind) -> SlipState:
    """Raw classification of one frame by the named detector."""
    return get_classifier(kind).classify(frame, config)


# --- Debounced state machine ---
def debounce(state: DetectorState, raw: SlipState, timestamp: float, debounce_k: int) -> Tuple[DetectorState, SlipState]:
    """Apply the k-of-k rule to one raw decision.

    The public state switches after ``debounce_k`` consecutive identical raw decisions
    that differ from it. Entering or leaving NO_CONTACT takes effect immediately.
    """
    if state.last_timestamp is not None and timestamp < state.last_timestamp:
        raise TimestampRegressionException(
            f"Frame timestamp {timestamp} precedes previous frame at {state.last_timestamp}"
        )

    public = state.public_state
    candidate: Optional[SlipState] = None
    count = 0

    if raw == SlipState.NO_CONTACT or public in (None, SlipState.NO_CONTACT):
        public = raw
    elif raw != public:
        count = state.candidate_count + 1 if state.candidate == raw else 1
        candidate = raw
        if count >= debounce_k:
            public, candidate, count = raw, None, 0

    new_state = DetectorState(
        public_state=public,
        candidate=candidate,
        candidate_count=count,
        last_timestamp=timestamp,
        frames_seen=state.frames_seen + 1,
    )
    return new_state, public


def detector_step(
    state: DetectorState,
    frame: ForceFrame,
    config: DetectorConfig,
    kind: DetectorKind,
) -> Tuple[DetectorState, SlipState]:
    """Classify ``frame`` and pass the raw decision through the debounce."""
    raw = classify_frame(frame, config, kind)
    return debounce(state, raw, frame.timestamp, config.debounce_k)


class SlipDetector:
    """Stateful wrapper that feeds frames through ``detector_step`` in order."""

    def __init__(self, kind: DetectorKind, config: Optional[DetectorConfig] = None):
        get_classifier(kind)
        self.kind = kind
        self.config = config or DetectorConfig()
        self.state = DetectorState()

    def reset(self) -> None:
        self.state = DetectorState()

    def process(self, frame: ForceFrame) -> SlipState:
        self.state, decision = detector_step(self.state, frame, self.config, self.kind)
        return decision

    def run(self, frames: Iterable[ForceFrame]) -> List[SlipState]:
        decisions = [self.process(frame) for frame in frames]
        logger.debug(f"{self.kind} detector processed {len(decisions)} frames")
        return decisions
