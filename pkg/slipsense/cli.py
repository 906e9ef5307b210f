"""Command-line interface: ``sim``, ``detect``, ``bench`` and ``evaluate``.

Each ``cmd_*`` function returns a process exit status: 0 on success, 1 when a
slipsense error is raised, 2 for unknown names or invalid parameter values.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from slipsense.benchmark import benchmark_stick_ratio
from slipsense.config import config
from slipsense.evaluation import build_trace, run_protocol, score_run
from slipsense.exceptions import (
    SlipSenseException,
    UnknownDetectorException,
    UnknownPresetException,
    handle_exception,
)
from slipsense.frame_io import read_sequence, replay_frames, write_sequence
from slipsense.models import ContactParams, DetectorConfig, MetricsReport, TaxelGridSpec
from slipsense.reporting import write_report, write_trace
from slipsense.scenarios import build_scenario_spec, generate_scenario, get_preset, list_presets
from slipsense.types import DetectorKind
from slipsense.utils import reports_to_dataframe, setup_logging

logger = logging.getLogger(__name__)

DETECTOR_CHOICES: Dict[str, List[DetectorKind]] = {
    "baseline": ["baseline"],
    "stick-ratio": ["stick_ratio"],
    "stick_ratio": ["stick_ratio"],
    "both": ["baseline", "stick_ratio"],
}


def resolve_detectors(name: str) -> List[DetectorKind]:
    """Map a CLI detector name to detector kinds.

    Raises:
        UnknownDetectorException: If ``name`` is not a known detector
    """
    if name not in DETECTOR_CHOICES:
        raise UnknownDetectorException(
            f"Unknown detector '{name}'. Choose one of: baseline, stick-ratio, both"
        )
    return DETECTOR_CHOICES[name]


def _fail(exc: Exception, context: str, status: int = 1) -> int:
    message = handle_exception(exc, context)
    logger.error(message)
    print(message, file=sys.stderr)
    return status


def _detector_config(**values) -> DetectorConfig:
    return DetectorConfig(**{key: value for key, value in values.items() if value is not None})


def cmd_sim(
    scenario_name: Optional[str],
    out_path: str,
    seed: int = 0,
    params: Optional[ContactParams] = None,
    grid: Optional[TaxelGridSpec] = None,
    frame_rate: Optional[float] = None,
    noise_sigma: Optional[float] = None,
    scenario_file: Optional[str] = None,
) -> int:
    """Generate a preset (or a JSON scenario file) and write it as a frame file."""
    try:
        if scenario_file:
            spec = build_scenario_spec(json.loads(Path(scenario_file).read_text()))
        else:
            spec = get_preset(scenario_name or config.DEFAULT_SCENARIO, frame_rate=frame_rate, noise_sigma=noise_sigma)
    except UnknownPresetException as e:
        return _fail(e, "sim", status=2)
    except (OSError, ValueError, SlipSenseException) as e:
        return _fail(e, "sim")

    try:
        sequence = generate_scenario(spec, params or ContactParams(), grid or TaxelGridSpec(), seed)
        write_sequence(sequence, out_path)
    except SlipSenseException as e:
        return _fail(e, "sim")

    slips = sequence.slip_intervals()
    print(f"Scenario '{spec.name}' (seed {seed}): {len(sequence.frames)} frames, {len(slips)} slip intervals -> {out_path}")
    for interval in slips:
        print(f"  SLIP {interval.start:.3f}s - {interval.end:.3f}s")
    return 0


def cmd_detect(
    in_path: str,
    detector: str = "both",
    mu: Optional[float] = None,
    sr_threshold: Optional[float] = None,
    epsilon: Optional[float] = None,
    debounce: Optional[int] = None,
    realtime: bool = False,
    trace_out: Optional[str] = None,
    report_out: Optional[str] = None,
) -> int:
    """Run detectors over a frame file, writing the trace and (with labels) the report."""
    try:
        kinds = resolve_detectors(detector)
        detector_config = _detector_config(mu=mu, sr_threshold=sr_threshold, contact_epsilon=epsilon, debounce_k=debounce)
    except UnknownDetectorException as e:
        return _fail(e, "detect", status=2)
    except ValidationError as e:
        return _fail(e, "detect", status=2)

    try:
        sequence = read_sequence(in_path)
        start = time.perf_counter()
        trace, predictions = build_trace(
            sequence,
            detector_config,
            kinds,
            frames=replay_frames(sequence.frames, sequence.frame_rate, realtime),
        )
        elapsed = time.perf_counter() - start

        reports: Dict[str, MetricsReport] = {}
        if sequence.truth:
            run_id = Path(in_path).stem
            reports = {kind: score_run(predictions[kind], sequence, kind, detector_config, run_id) for kind in kinds}

        if trace_out:
            write_trace(trace, trace_out)
        if report_out:
            if reports:
                write_report(reports, report_out)
            else:
                logger.warning(f"No labels found for {in_path}; skipping report")
    except SlipSenseException as e:
        return _fail(e, "detect")

    rate = len(trace) / elapsed if elapsed > 0 else float("inf")
    print(f"Processed {len(trace)} frames in {elapsed:.3f}s ({rate:.1f} frames/s)")
    if realtime:
        print(f"Real-time replay at nominal {sequence.frame_rate:g} Hz achieved {rate:.1f} Hz")
    if reports:
        print(reports_to_dataframe(reports).to_string())
    return 0


def cmd_bench(in_path: str, repetitions: Optional[int] = None) -> int:
    """Measure compute-only stick-ratio throughput over a frame file."""
    try:
        sequence = read_sequence(in_path)
        result = benchmark_stick_ratio(sequence.frames, repetitions=repetitions or config.BENCH_REPETITIONS)
    except SlipSenseException as e:
        return _fail(e, "bench")
    except ValueError as e:
        return _fail(e, "bench", status=2)

    print(f"n={result.n}, {result.frames} frames x {result.repetitions} repetitions")
    print(f"mean: {result.mean_fps:.1f} frames/s")
    print(f"min:  {result.min_fps:.1f} frames/s")
    if result.min_fps < config.REALTIME_MIN_HZ:
        logger.warning(f"Minimum throughput {result.min_fps:.1f} fps is below {config.REALTIME_MIN_HZ:g} Hz")
    return 0


def cmd_evaluate(
    scenario_name: str,
    seeds: Optional[Sequence[int]] = None,
    params: Optional[ContactParams] = None,
    grid: Optional[TaxelGridSpec] = None,
    detector_config: Optional[DetectorConfig] = None,
    noise_sigma: Optional[float] = None,
    frame_rate: Optional[float] = None,
    report_out: Optional[str] = None,
) -> int:
    """Run the seeded multi-run protocol and print averaged scores."""
    try:
        result = run_protocol(
            scenario_name,
            params=params,
            grid=grid,
            seeds=seeds,
            detector_config=detector_config,
            noise_sigma=noise_sigma,
            frame_rate=frame_rate,
        )
        if report_out:
            write_report({**result.reports(), **result.by_motion}, report_out)
    except UnknownPresetException as e:
        return _fail(e, "evaluate", status=2)
    except SlipSenseException as e:
        return _fail(e, "evaluate")

    print(f"Scenario '{result.scenario}', seeds {result.seeds}")
    print(reports_to_dataframe(result.reports()).to_string())
    if result.by_motion:
        print("\nBy motion type:")
        print(reports_to_dataframe(result.by_motion).to_string())
    return 0


# --- Argument parsing ---
def _add_contact_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("contact and grid")
    group.add_argument("--n", type=int, default=config.GRID_N, help="taxels per side")
    group.add_argument("--pitch", type=float, default=config.TAXEL_PITCH_MM, help="taxel pitch in mm")
    group.add_argument("--radius", type=float, default=config.CONTACT_RADIUS_MM, help="contact radius in mm")
    group.add_argument("--load", type=float, default=config.NORMAL_LOAD_N, help="normal load in N")
    group.add_argument("--sim-mu", type=float, default=config.FRICTION_COEFFICIENT, help="friction coefficient of the simulated contact")
    group.add_argument("--frame-rate", type=float, default=None, help="frames per second")
    group.add_argument("--noise", type=float, default=None, help="per-taxel Gaussian noise sigma in N")


def _add_detector_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("detector")
    group.add_argument("--mu", type=float, default=None, help=f"friction coefficient (default {config.FRICTION_COEFFICIENT})")
    group.add_argument("--sr-threshold", type=float, default=None, help=f"stick ratio threshold (default {config.SR_THRESHOLD})")
    group.add_argument(
        "--epsilon",
        type=float,
        default=None,
        help=f"contact threshold in N (default {config.CONTACT_EPSILON_N}); use about 4x the noise sigma on noisy data",
    )
    group.add_argument("--debounce", type=int, default=None, help=f"debounce frames (default {config.DEBOUNCE_K})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slipsense", description="Tactile slip detection toolkit")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sim = subparsers.add_parser("sim", help="generate a labeled frame file from a scenario")
    sim.add_argument("--scenario", default=config.DEFAULT_SCENARIO, help=f"preset name, one of {list_presets()}")
    sim.add_argument("--scenario-file", default=None, help="JSON scenario description instead of a preset")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output .taxfrm path")
    _add_contact_arguments(sim)

    detect = subparsers.add_parser("detect", help="run slip detectors over a frame file")
    detect.add_argument("input", help="input .taxfrm path")
    detect.add_argument("--detector", default="both", help="baseline, stick-ratio or both")
    _add_detector_arguments(detect)
    detect.add_argument("--realtime", action="store_true", help="pace frames at the file's frame rate")
    detect.add_argument("--trace-out", default=None, help="trace CSV path")
    detect.add_argument("--report-out", default=None, help="metrics report JSON path")

    bench = subparsers.add_parser("bench", help="measure stick-ratio throughput")
    bench.add_argument("input", help="input .taxfrm path")
    bench.add_argument("--repetitions", type=int, default=config.BENCH_REPETITIONS)

    evaluate = subparsers.add_parser("evaluate", help="seeded multi-run comparison of both detectors")
    evaluate.add_argument("--scenario", default=config.DEFAULT_SCENARIO, help=f"preset name, one of {list_presets()}")
    evaluate.add_argument("--seeds", default=config.EVAL_SEEDS, help="comma-separated seeds")
    evaluate.add_argument("--report-out", default=None, help="metrics report JSON path")
    _add_contact_arguments(evaluate)
    _add_detector_arguments(evaluate)

    return parser


def _parse_seeds(text: str) -> List[int]:
    return [int(s) for s in text.split(",") if s.strip()]


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    if args.command == "detect":
        return cmd_detect(
            args.input,
            detector=args.detector,
            mu=args.mu,
            sr_threshold=args.sr_threshold,
            epsilon=args.epsilon,
            debounce=args.debounce,
            realtime=args.realtime,
            trace_out=args.trace_out,
            report_out=args.report_out,
        )
    if args.command == "bench":
        return cmd_bench(args.input, args.repetitions)

    try:
        grid = TaxelGridSpec(n=args.n, pitch=args.pitch)
        params = ContactParams(a=args.radius, P=args.load, mu=args.sim_mu)
        if args.command == "sim":
            return cmd_sim(
                args.scenario,
                args.out,
                seed=args.seed,
                params=params,
                grid=grid,
                frame_rate=args.frame_rate,
                noise_sigma=args.noise,
                scenario_file=args.scenario_file,
            )
        detector_config = _detector_config(
            mu=args.mu, sr_threshold=args.sr_threshold, contact_epsilon=args.epsilon, debounce_k=args.debounce
        )
        seeds = _parse_seeds(args.seeds)
    except (ValidationError, ValueError) as e:
        return _fail(e, args.command, status=2)

    return cmd_evaluate(
        args.scenario,
        seeds=seeds,
        params=params,
        grid=grid,
        detector_config=detector_config,
        noise_sigma=args.noise,
        frame_rate=args.frame_rate,
        report_out=args.report_out,
    )


if __name__ == "__main__":
    sys.exit(main())
