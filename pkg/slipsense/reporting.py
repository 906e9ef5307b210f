"""Trace CSV and metrics report files."""

import json
import logging
from pathlib import Path
from typing import Dict, List, Union

from slipsense.exceptions import FrameFileException
from slipsense.models import MetricsReport, TraceRecord
from slipsense.utils import trace_to_dataframe

logger = logging.getLogger(__name__)


def write_trace(trace: List[TraceRecord], path: Union[str, Path]) -> None:
    try:
        trace_to_dataframe(trace).to_csv(path, index=False, float_format="%.9g")
    except OSError as e:
        raise FrameFileException(f"Failed to write trace to {path}: {e}") from e
    logger.info(f"Wrote {len(trace)} trace rows to {path}")


def write_report(reports: Dict[str, MetricsReport], path: Union[str, Path]) -> None:
    """Write reports as one JSON object keyed by label."""
    payload = {label: report.model_dump(mode="json") for label, report in reports.items()}
    try:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise FrameFileException(f"Failed to write report to {path}: {e}") from e
    logger.info(f"Wrote {len(reports)} metrics reports to {path}")


def read_report(path: Union[str, Path]) -> Dict[str, MetricsReport]:
    payload = json.loads(Path(path).read_text())
    return {label: MetricsReport.model_validate(data) for label, data in payload.items()}
