import numpy as np
import pytest

from slipsense.contact import full_slip_torque, hertz_pressure, torsional_partial_slip
from slipsense.detection import (
    ClassifierRegistry,
    SlipClassifier,
    SlipDetector,
    classify_frame,
    coulomb_baseline_classify,
    detector_step,
    get_classifier,
    get_supported_detectors,
    register_classifier,
    stick_ratio,
    stick_ratio_classify,
)
from slipsense.exceptions import TimestampRegressionException, UnknownDetectorException
from slipsense.models import ContactParams, DetectorConfig, DetectorState, ForceFrame, SlipState, StickRatioResult, TaxelGridSpec

CONFIG = DetectorConfig(mu=0.45, sr_threshold=0.5, contact_epsilon=1e-3, debounce_k=1)
STICK, SLIP, NO_CONTACT = SlipState.STICK, SlipState.SLIP, SlipState.NO_CONTACT


def point_frame(fx=0.0, fy=0.0, fz=1.0, timestamp=0.0, n=4):
    fields = {name: np.zeros((n, n)) for name in ("fx", "fy", "fz")}
    fields["fx"][1, 2] = fx
    fields["fy"][1, 2] = fy
    fields["fz"][1, 2] = fz
    return ForceFrame(timestamp=timestamp, **fields)


def frames_for(raw_states, start=0.0):
    """One-taxel frames whose raw classification matches ``raw_states`` for both detectors."""
    shapes = {STICK: dict(fx=0.0, fz=1.0), SLIP: dict(fx=1.0, fz=1.0), NO_CONTACT: dict(fx=0.0, fz=0.0)}
    return [point_frame(timestamp=start + i * 0.01, **shapes[state]) for i, state in enumerate(raw_states)]


def run(kind, frames, config):
    state = DetectorState()
    outputs = []
    for frame in frames:
        state, decision = detector_step(state, frame, config, kind)
        outputs.append(decision)
    return outputs


def test_baseline_cases():
    assert coulomb_baseline_classify(point_frame(fx=0.0, fz=1.0), CONFIG) == STICK
    assert coulomb_baseline_classify(point_frame(fx=0.5, fz=1.0), CONFIG) == SLIP
    assert coulomb_baseline_classify(ForceFrame.zeros(4), CONFIG) == NO_CONTACT


def test_baseline_misses_rotational_slip():
    grid = TaxelGridSpec(n=20, pitch=1.5)
    params = ContactParams()
    fx, fy = torsional_partial_slip(params, 1.2 * full_slip_torque(params, grid), grid)
    frame = ForceFrame(timestamp=0.0, fx=fx, fy=fy, fz=hertz_pressure(params, grid))
    assert coulomb_baseline_classify(frame, CONFIG) == STICK
    assert stick_ratio(frame, CONFIG).sr == 0.0
    assert stick_ratio_classify(stick_ratio(frame, CONFIG), CONFIG) == SLIP


def test_stick_ratio_cases():
    full_stick = ForceFrame(timestamp=0.0, fx=np.zeros((5, 5)), fy=np.zeros((5, 5)), fz=np.ones((5, 5)))
    result = stick_ratio(full_stick, CONFIG)
    assert (result.stick_count, result.contact_count, result.sr) == (25, 25, 1.0)

    empty = stick_ratio(ForceFrame.zeros(5), CONFIG)
    assert (empty.stick_count, empty.contact_count, empty.sr) == (0, 0, None)


def test_stick_ratio_counts_equality_as_stick():
    frame = point_frame(fx=0.45, fz=1.0)
    assert stick_ratio(frame, CONFIG).sr == 1.0
    assert coulomb_baseline_classify(frame, CONFIG) == STICK


def test_stick_ratio_ignores_taxels_below_epsilon():
    fz = np.zeros((3, 3))
    fx = np.zeros((3, 3))
    fz[0, 0], fz[1, 1], fz[2, 2] = 1.0, 1.0, 5e-4
    fx[1, 1], fx[2, 2] = 1.0, 1.0
    result = stick_ratio(ForceFrame(timestamp=0.0, fx=fx, fy=np.zeros((3, 3)), fz=fz), CONFIG)
    assert (result.stick_count, result.contact_count) == (1, 2)
    assert result.sr == 0.5


def test_stick_ratio_classify_cases():
    assert stick_ratio_classify(StickRatioResult(stick_count=2, contact_count=5, sr=0.4), CONFIG) == SLIP
    assert stick_ratio_classify(StickRatioResult(stick_count=1, contact_count=2, sr=0.5), CONFIG) == STICK
    assert stick_ratio_classify(StickRatioResult(stick_count=0, contact_count=0), CONFIG) == NO_CONTACT


def test_stick_ratio_result_validation():
    with pytest.raises(ValueError):
        StickRatioResult(stick_count=3, contact_count=2, sr=1.0)
    with pytest.raises(ValueError):
        StickRatioResult(stick_count=0, contact_count=0, sr=0.0)
    with pytest.raises(ValueError):
        StickRatioResult(stick_count=1, contact_count=2)


def test_detector_config_validation():
    with pytest.raises(ValueError):
        DetectorConfig(mu=0.0)
    with pytest.raises(ValueError):
        DetectorConfig(sr_threshold=1.5)
    with pytest.raises(ValueError):
        DetectorConfig(contact_epsilon=-1e-3)
    with pytest.raises(ValueError):
        DetectorConfig(debounce_k=0)


@pytest.mark.parametrize("kind", ["baseline", "stick_ratio"])
def test_debounce_pass_through(kind):
    assert run(kind, frames_for([STICK, SLIP, STICK]), CONFIG) == [STICK, SLIP, STICK]


@pytest.mark.parametrize("kind", ["baseline", "stick_ratio"])
def test_debounce_two_of_two(kind):
    config = CONFIG.model_copy(update={"debounce_k": 2})
    outputs = run(kind, frames_for([STICK, SLIP, SLIP, STICK, SLIP]), config)
    assert outputs == [STICK, STICK, SLIP, SLIP, SLIP]


def test_no_contact_bypasses_debounce():
    config = CONFIG.model_copy(update={"debounce_k": 3})
    outputs = run("stick_ratio", frames_for([STICK, NO_CONTACT, SLIP, SLIP, SLIP, SLIP]), config)
    assert outputs == [STICK, NO_CONTACT, SLIP, SLIP, SLIP, SLIP]


def test_all_zero_frames_are_no_contact():
    frames = [ForceFrame.zeros(4, timestamp=0.1 * i) for i in range(5)]
    for kind in ("baseline", "stick_ratio"):
        assert run(kind, frames, CONFIG.model_copy(update={"debounce_k": 3})) == [NO_CONTACT] * 5


def test_timestamp_regression_raises():
    state, _ = detector_step(DetectorState(), point_frame(timestamp=1.0), CONFIG, "baseline")
    with pytest.raises(TimestampRegressionException):
        detector_step(state, point_frame(timestamp=0.5), CONFIG, "baseline")


def test_equal_timestamps_are_accepted():
    state, _ = detector_step(DetectorState(), point_frame(timestamp=1.0), CONFIG, "baseline")
    state, _ = detector_step(state, point_frame(timestamp=1.0), CONFIG, "baseline")
    assert state.frames_seen == 2


def test_registry():
    assert set(get_supported_detectors()) >= {"baseline", "stick_ratio"}
    assert classify_frame(point_frame(fx=1.0), CONFIG, "stick_ratio") == SLIP
    with pytest.raises(UnknownDetectorException):
        get_classifier("fft")
    with pytest.raises(UnknownDetectorException):
        SlipDetector("fft")
    assert isinstance(get_classifier("baseline"), SlipClassifier)


class AlwaysSlip(SlipClassifier):
    kind = "always_slip"

    def classify(self, frame, config):
        return SLIP


def test_registry_accepts_custom_classifier():
    registry = ClassifierRegistry()
    registry.register("always_slip", AlwaysSlip())
    assert registry.get_supported_kinds() == ["baseline", "stick_ratio", "always_slip"]
    assert registry.get("always_slip").classify(point_frame(), CONFIG) == SLIP
    with pytest.raises(UnknownDetectorException):
        ClassifierRegistry().get("always_slip")


def test_registered_classifier_drives_detector():
    register_classifier("always_slip", AlwaysSlip())
    assert "always_slip" in get_supported_detectors()
    assert SlipDetector("always_slip", CONFIG).run(frames_for([STICK, STICK])) == [SLIP, SLIP]


def test_slip_detector_run_and_reset():
    detector = SlipDetector("stick_ratio", CONFIG.model_copy(update={"debounce_k": 2}))
    assert detector.run(frames_for([STICK, SLIP, SLIP])) == [STICK, STICK, SLIP]
    detector.reset()
    assert detector.state == DetectorState()
    assert detector.run(frames_for([SLIP])) == [SLIP]
