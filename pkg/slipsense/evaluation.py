"""Frame-level scoring of slip detectors against analytic ground truth.

SLIP is the positive class. Frames predicted NO_CONTACT and frames outside every truth
interval are excluded from scoring and counted as ``ignored``. Ratios with a zero
denominator are reported as None.
"""

import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from slipsense.config import config as settings
from slipsense.detection import SlipDetector, stick_ratio
from slipsense.exceptions import EmptyRunListException, MixedConfigException, ScoringMismatchException
from slipsense.models import (
    ConfusionCounts,
    ContactParams,
    DetectorComparison,
    DetectorConfig,
    ForceFrame,
    LabeledSequence,
    MetricsReport,
    ProtocolResult,
    SlipState,
    TaxelGridSpec,
    TraceRecord,
)
from slipsense.scenarios import generate_scenario, get_preset
from slipsense.taxels import aggregate_forces
from slipsense.types import DETECTOR_KINDS, DetectorKind, MotionKind, ProgressCallback

logger = logging.getLogger(__name__)


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


def confusion_counts(
    predictions: Sequence[SlipState], labels: Sequence[Optional[SlipState]]
) -> ConfusionCounts:
    tp = fp = tn = fn = ignored = 0
    for predicted, actual in zip(predictions, labels):
        if predicted == SlipState.NO_CONTACT or actual is None:
            ignored += 1
        elif predicted == SlipState.SLIP:
            if actual == SlipState.SLIP:
                tp += 1
            else:
                fp += 1
        elif actual == SlipState.SLIP:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn, ignored=ignored)


def _report(
    counts: ConfusionCounts,
    detector: DetectorKind,
    detector_config: Optional[DetectorConfig],
    run_id: str,
) -> MetricsReport:
    return MetricsReport(
        run_id=run_id,
        detector=detector,
        detector_config=detector_config or DetectorConfig(),
        counts=counts,
        accuracy=_ratio(counts.tp + counts.tn, counts.scored),
        precision=_ratio(counts.tp, counts.tp + counts.fp),
        recall=_ratio(counts.tp, counts.tp + counts.fn),
    )


def _check_alignment(
    predictions: Sequence[SlipState], sequence: LabeledSequence, timestamps: Optional[Sequence[float]]
) -> None:
    if len(predictions) != len(sequence.frames):
        raise ScoringMismatchException(
            f"Got {len(predictions)} predictions for {len(sequence.frames)} frames"
        )
    if timestamps is not None:
        if len(timestamps) != len(sequence.frames):
            raise ScoringMismatchException(
                f"Got {len(timestamps)} timestamps for {len(sequence.frames)} frames"
            )
        for i, (t, frame) in enumerate(zip(timestamps, sequence.frames)):
            if t != frame.timestamp:
                raise ScoringMismatchException(
                    f"Prediction {i} is stamped {t} but frame {i} is at {frame.timestamp}"
                )


def score_run(
    predictions: Sequence[SlipState],
    truth: LabeledSequence,
    detector: DetectorKind = "stick_ratio",
    detector_config: Optional[DetectorConfig] = None,
    run_id: str = "",
    timestamps: Optional[Sequence[float]] = None,
) -> MetricsReport:
    """Score one prediction per frame against the truth interval containing it.

    Args:
        predictions: Per-frame detector output, in frame order
        truth: The labeled sequence the predictions were made on
        detector: Detector kind echoed into the report
        detector_config: Detector configuration echoed into the report
        run_id: Identifier echoed into the report
        timestamps: Prediction timestamps, checked against the frames when given

    Raises:
        ScoringMismatchException: If predictions and frames do not line up
    """
    _check_alignment(predictions, truth, timestamps)
    counts = confusion_counts(predictions, truth.truth_labels())
    return _report(counts, detector, detector_config, run_id)


def score_by_motion(
    predictions: Sequence[SlipState],
    truth: LabeledSequence,
    detector: DetectorKind = "stick_ratio",
    detector_config: Optional[DetectorConfig] = None,
    run_id: str = "",
) -> Dict[MotionKind, MetricsReport]:
    """Score frames inside translate phases and inside rotate phases separately."""
    _check_alignment(predictions, truth, None)
    labels = truth.truth_labels()
    reports: Dict[MotionKind, MetricsReport] = {}
    for motion in ("translate", "rotate"):
        selected_predictions = []
        selected_labels = []
        for frame, predicted, actual in zip(truth.frames, predictions, labels):
            phase = truth.phase_at(frame.timestamp)
            if phase is not None and phase.kind == motion:
                selected_predictions.append(predicted)
                selected_labels.append(actual)
        counts = confusion_counts(selected_predictions, selected_labels)
        reports[motion] = _report(counts, detector, detector_config, run_id)
    return reports


def _mean(values: List[Optional[float]]) -> Optional[float]:
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return math.fsum(defined) / len(defined)


def average_runs(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Average accuracy, precision and recall over runs; counts are summed.

    Raises:
        EmptyRunListException: If ``reports`` is empty
        MixedConfigException: If reports come from different detectors or configurations
    """
    if not reports:
        raise EmptyRunListException("Cannot average an empty list of reports")
    if len(reports) == 1:
        return reports[0]
    first = reports[0]
    for report in reports[1:]:
        if report.detector != first.detector or report.detector_config != first.detector_config:
            raise MixedConfigException(
                f"Cannot average {first.detector} run '{first.run_id}' with "
                f"{report.detector} run '{report.run_id}' under a different configuration"
            )

    counts = ConfusionCounts()
    for report in reports:
        counts = counts + report.counts
    return MetricsReport(
        run_id=",".join(sorted(report.run_id for report in reports)),
        detector=first.detector,
        detector_config=first.detector_config,
        counts=counts,
        accuracy=_mean([r.accuracy for r in reports]),
        precision=_mean([r.precision for r in reports]),
        recall=_mean([r.recall for r in reports]),
    )


def build_trace(
    sequence: LabeledSequence,
    detector_config: DetectorConfig,
    kinds: Sequence[DetectorKind] = DETECTOR_KINDS,
    frames: Optional[Iterable[ForceFrame]] = None,
) -> Tuple[List[TraceRecord], Dict[DetectorKind, List[SlipState]]]:
    """Run the requested detectors over the sequence and record one trace row per frame.

    ``frames`` overrides the frame source (e.g. a paced replay of ``sequence.frames``).
    """
    detectors = {kind: SlipDetector(kind, detector_config) for kind in kinds}
    predictions: Dict[DetectorKind, List[SlipState]] = {kind: [] for kind in kinds}
    trace: List[TraceRecord] = []
    for frame in (sequence.frames if frames is None else frames):
        aggregates = aggregate_forces(frame, sequence.grid)
        decisions = {kind: detector.process(frame) for kind, detector in detectors.items()}
        for kind, decision in decisions.items():
            predictions[kind].append(decision)
        trace.append(TraceRecord(
            timestamp=frame.timestamp,
            F_N=aggregates.F_N,
            F_T=aggregates.F_T,
            M=aggregates.M,
            sr=stick_ratio(frame, detector_config).sr,
            state_baseline=decisions.get("baseline"),
            state_stick_ratio=decisions.get("stick_ratio"),
            truth=sequence.truth_at(frame.timestamp),
        ))
    return trace, predictions


def compare_detectors(
    sequence: LabeledSequence,
    detector_config: Optional[DetectorConfig] = None,
    run_id: str = "",
) -> DetectorComparison:
    """Run both detectors over identical frames and score each."""
    detector_config = detector_config or DetectorConfig()
    trace, predictions = build_trace(sequence, detector_config)
    comparison = DetectorComparison(
        baseline=score_run(predictions["baseline"], sequence, "baseline", detector_config, run_id),
        stick_ratio=score_run(predictions["stick_ratio"], sequence, "stick_ratio", detector_config, run_id),
        trace=trace,
    )
    logger.info(
        f"Run '{run_id or sequence.name}': baseline accuracy {comparison.baseline.accuracy}, "
        f"stick-ratio accuracy {comparison.stick_ratio.accuracy}"
    )
    return comparison


def run_protocol(
    scenario: str,
    params: Optional[ContactParams] = None,
    grid: Optional[TaxelGridSpec] = None,
    seeds: Optional[Sequence[int]] = None,
    detector_config: Optional[DetectorConfig] = None,
    noise_sigma: Optional[float] = None,
    frame_rate: Optional[float] = None,
    progress_callback: Optional[ProgressCallback] = None,
) -> ProtocolResult:
    """Generate one sequence per seed, compare detectors on each, average per detector."""
    params = params or ContactParams()
    grid = grid or TaxelGridSpec()
    seeds = list(seeds) if seeds is not None else settings.eval_seeds()
    detector_config = detector_config or DetectorConfig()
    spec = get_preset(scenario, frame_rate=frame_rate, noise_sigma=noise_sigma)

    runs = []
    by_motion: Dict[str, List[MetricsReport]] = {}
    for seed in seeds:
        if progress_callback:
            progress_callback(f"Running '{scenario}' with seed {seed}")
        run_id = f"{scenario}-seed{seed}"
        sequence = generate_scenario(spec, params, grid, seed)
        comparison = compare_detectors(sequence, detector_config, run_id=run_id)
        runs.append(comparison)
        for kind in DETECTOR_KINDS:
            predictions = [getattr(record, f"state_{kind}") for record in comparison.trace]
            for motion, report in score_by_motion(predictions, sequence, kind, detector_config, run_id).items():
                by_motion.setdefault(f"{kind}/{motion}", []).append(report)

    return ProtocolResult(
        scenario=scenario,
        seeds=seeds,
        baseline=average_runs([run.baseline for run in runs]),
        stick_ratio=average_runs([run.stick_ratio for run in runs]),
        by_motion={label: average_runs(reports) for label, reports in by_motion.items()},
        runs=runs,
    )
