import pytest

from slipsense.evaluation import (
    average_runs,
    compare_detectors,
    confusion_counts,
    score_by_motion,
    score_run,
)
from slipsense.exceptions import EmptyRunListException, MixedConfigException, ScoringMismatchException
from slipsense.models import (
    ConfusionCounts,
    ContactParams,
    DetectorConfig,
    ForceFrame,
    GripPhase,
    HoldPhase,
    LabeledSequence,
    MetricsReport,
    PhaseRecord,
    ScenarioSpec,
    SlipState,
    TaxelGridSpec,
    TranslatePhase,
    TruthInterval,
)
from slipsense.scenarios import generate_scenario

STICK, SLIP, NO_CONTACT = SlipState.STICK, SlipState.SLIP, SlipState.NO_CONTACT


def make_sequence(count=5, phases=()):
    """Frames at t = 0..count-1 with truth [0, 2) STICK and [2, 5) SLIP."""
    return LabeledSequence(
        name="hand",
        grid=TaxelGridSpec(n=2, pitch=1.0),
        frame_rate=1.0,
        frames=[ForceFrame.zeros(2, float(k)) for k in range(count)],
        truth=[
            TruthInterval(start=0.0, end=2.0, state=STICK),
            TruthInterval(start=2.0, end=5.0, state=SLIP),
        ],
        phases=list(phases),
    )


def make_report(run_id="", accuracy=None, precision=None, recall=None, detector="stick_ratio", config=None):
    return MetricsReport(
        run_id=run_id,
        detector=detector,
        detector_config=config or DetectorConfig(),
        counts=ConfusionCounts(tp=1, tn=1),
        accuracy=accuracy,
        precision=precision,
        recall=recall,
    )


# --- score_run ---
def test_hand_counted_run():
    report = score_run([STICK, SLIP, SLIP, STICK, NO_CONTACT], make_sequence(), run_id="hand")
    assert report.counts == ConfusionCounts(tp=1, fp=1, tn=1, fn=1, ignored=1)
    assert report.accuracy == 0.5
    assert report.precision == 0.5
    assert report.recall == 0.5
    assert report.scored_frames == 4
    assert report.run_id == "hand"


def test_late_onset_and_early_release_run():
    report = score_run([STICK, SLIP, SLIP, SLIP, STICK], make_sequence())
    assert report.counts == ConfusionCounts(tp=2, fp=1, tn=1, fn=1)
    assert report.accuracy == pytest.approx(0.6)
    assert report.precision == pytest.approx(2 / 3)
    assert report.recall == pytest.approx(2 / 3)


def test_perfect_predictions():
    sequence = make_sequence()
    report = score_run(sequence.truth_labels(), sequence)
    assert report.accuracy == 1.0
    assert report.precision == 1.0
    assert report.recall == 1.0


def test_never_slip_has_undefined_precision():
    report = score_run([STICK] * 5, make_sequence())
    assert report.precision is None
    assert report.recall == 0.0
    assert report.accuracy == pytest.approx(0.4)


def test_frames_outside_truth_are_ignored():
    report = score_run([SLIP] * 7, make_sequence(count=7))
    assert report.counts.ignored == 2
    assert report.counts.scored == 5


def test_flipping_predictions_complements_accuracy():
    predictions = [STICK, SLIP, SLIP, STICK, SLIP]
    flipped = [SLIP if p == STICK else STICK for p in predictions]
    sequence = make_sequence()
    assert score_run(flipped, sequence).accuracy == pytest.approx(1.0 - score_run(predictions, sequence).accuracy)


def test_flipping_predictions_and_truth_keeps_accuracy():
    predictions = [STICK, SLIP, SLIP, STICK, SLIP]
    flipped = [SLIP if p == STICK else STICK for p in predictions]
    sequence = make_sequence()
    mirrored = sequence.model_copy(
        update={
            "truth": [
                TruthInterval(start=0.0, end=2.0, state=SLIP),
                TruthInterval(start=2.0, end=5.0, state=STICK),
            ]
        }
    )
    original = score_run(predictions, sequence)
    both = score_run(flipped, mirrored)
    assert both.accuracy == pytest.approx(original.accuracy)
    assert (both.counts.tp, both.counts.tn) == (original.counts.tn, original.counts.tp)
    assert (both.counts.fp, both.counts.fn) == (original.counts.fn, original.counts.fp)


def test_empty_sequence_is_degenerate():
    sequence = LabeledSequence(grid=TaxelGridSpec(n=2, pitch=1.0), frame_rate=1.0)
    report = score_run([], sequence)
    assert report.is_degenerate
    assert report.accuracy is None and report.precision is None and report.recall is None


def test_all_no_contact_is_degenerate():
    report = score_run([NO_CONTACT] * 5, make_sequence())
    assert report.is_degenerate
    assert report.counts.ignored == 5


def test_prediction_count_mismatch():
    with pytest.raises(ScoringMismatchException):
        score_run([STICK] * 4, make_sequence())


def test_timestamp_mismatch():
    sequence = make_sequence()
    score_run([STICK] * 5, sequence, timestamps=[0.0, 1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ScoringMismatchException):
        score_run([STICK] * 5, sequence, timestamps=[0.0, 1.0, 2.0, 3.0, 4.5])
    with pytest.raises(ScoringMismatchException):
        score_run([STICK] * 5, sequence, timestamps=[0.0, 1.0])


def test_confusion_counts_add():
    total = ConfusionCounts(tp=1, fn=2) + ConfusionCounts(tp=3, ignored=4)
    assert total == ConfusionCounts(tp=4, fn=2, ignored=4)


# --- score_by_motion ---
def test_score_by_motion_splits_phases():
    phases = [
        PhaseRecord(index=0, kind="hold", start=0.0, end=2.0),
        PhaseRecord(index=1, kind="translate", start=2.0, end=5.0),
    ]
    reports = score_by_motion([STICK, STICK, SLIP, SLIP, STICK], make_sequence(phases=phases))
    assert reports["translate"].counts == ConfusionCounts(tp=2, fn=1)
    assert reports["translate"].recall == pytest.approx(2 / 3)
    assert reports["rotate"].is_degenerate


# --- average_runs ---
def test_average_of_single_run_is_identity():
    report = make_report("a", accuracy=0.7)
    assert average_runs([report]) == report


def test_average_accuracy():
    reports = [make_report(r, accuracy=a) for r, a in (("b", 0.8), ("a", 0.9), ("c", 1.0))]
    averaged = average_runs(reports)
    assert averaged.accuracy == pytest.approx(0.9)
    assert averaged.run_id == "a,b,c"
    assert averaged.counts == ConfusionCounts(tp=3, tn=3)


def test_average_is_order_independent():
    reports = [make_report(str(i), accuracy=a) for i, a in enumerate((0.1, 0.7, 0.3, 0.95, 0.6))]
    assert average_runs(reports) == average_runs(list(reversed(reports)))
    assert average_runs(reports) == average_runs(reports[2:] + reports[:2])


def test_average_skips_undefined_ratios():
    averaged = average_runs([make_report("a", precision=0.5), make_report("b", precision=None)])
    assert averaged.precision == 0.5
    assert averaged.recall is None


def test_average_of_nothing_raises():
    with pytest.raises(EmptyRunListException):
        average_runs([])


def test_average_rejects_mixed_runs():
    with pytest.raises(MixedConfigException):
        average_runs([make_report("a"), make_report("b", detector="baseline")])
    with pytest.raises(MixedConfigException):
        average_runs([make_report("a"), make_report("b", config=DetectorConfig(mu=0.6))])


# --- compare_detectors ---
def test_compare_detectors_scores_identical_frames():
    spec = ScenarioSpec(
        phases=[GripPhase(duration=0.2), HoldPhase(duration=0.2), TranslatePhase(duration=0.6, ramp_duration=0.2)],
        frame_rate=50.0,
        noise_sigma=0.0,
    )
    sequence = generate_scenario(spec, ContactParams(), TaxelGridSpec(n=20, pitch=1.5), seed=0)
    comparison = compare_detectors(sequence, run_id="short")
    assert len(comparison.trace) == len(sequence.frames) == 50
    assert comparison.baseline.detector == "baseline"
    assert comparison.stick_ratio.detector == "stick_ratio"
    assert comparison.baseline.run_id == comparison.stick_ratio.run_id == "short"
    assert comparison.trace[0].state_stick_ratio == NO_CONTACT
    assert comparison.trace[-1].state_stick_ratio == SLIP
    assert comparison.trace[-1].state_baseline == SLIP
    assert comparison.stick_ratio.accuracy >= 0.9
