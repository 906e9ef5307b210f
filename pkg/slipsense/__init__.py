"""slipsense: model-based grasp slip detection over taxel force distributions."""

from slipsense.contact import (
    add_noise,
    analytic_stick_fraction,
    cattaneo_mindlin_shear,
    hertz_pressure,
    torsional_partial_slip,
)
from slipsense.detection import (
    SlipDetector,
    coulomb_baseline_classify,
    detector_step,
    stick_ratio,
    stick_ratio_classify,
)
from slipsense.evaluation import average_runs, compare_detectors, run_protocol, score_by_motion, score_run
from slipsense.frame_io import read_sequence, write_sequence
from slipsense.models import (
    ContactParams,
    DetectorConfig,
    DetectorState,
    ForceFrame,
    LabeledSequence,
    MetricsReport,
    ScenarioSpec,
    SlipState,
    StickRatioResult,
    TaxelGridSpec,
)
from slipsense.scenarios import generate_scenario, get_preset, list_presets
from slipsense.taxels import (
    aggregate_forces,
    contact_set,
    net_moment_z,
    total_normal_force,
    total_shear_components,
    total_shear_magnitude,
)

__all__ = [
    "ContactParams",
    "DetectorConfig",
    "DetectorState",
    "ForceFrame",
    "LabeledSequence",
    "MetricsReport",
    "ScenarioSpec",
    "SlipDetector",
    "SlipState",
    "StickRatioResult",
    "TaxelGridSpec",
    "add_noise",
    "aggregate_forces",
    "analytic_stick_fraction",
    "average_runs",
    "cattaneo_mindlin_shear",
    "compare_detectors",
    "contact_set",
    "coulomb_baseline_classify",
    "detector_step",
    "generate_scenario",
    "get_preset",
    "hertz_pressure",
    "list_presets",
    "net_moment_z",
    "read_sequence",
    "run_protocol",
    "score_by_motion",
    "score_run",
    "stick_ratio",
    "stick_ratio_classify",
    "torsional_partial_slip",
    "total_normal_force",
    "total_shear_components",
    "total_shear_magnitude",
    "write_sequence",
]
