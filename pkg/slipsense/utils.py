# slipsense/utils.py
import logging
from typing import Dict, Iterable, Optional

import pandas as pd

from slipsense.config import config
from slipsense.models import MetricsReport, TraceRecord

TRACE_COLUMNS = ["timestamp", "F_N", "F_T", "M", "sr", "state_baseline", "state_stick_ratio", "truth"]


def setup_logging(level: Optional[str] = None) -> None:
    """Configure root logging from ``config.LOG_LEVEL`` / ``config.LOG_FORMAT``."""
    logging.basicConfig(level=(level or config.LOG_LEVEL).upper(), format=config.LOG_FORMAT, force=True)


def trace_to_dataframe(trace: Iterable[TraceRecord]) -> pd.DataFrame:
    """One row per frame; undefined stick ratios and absent states become empty cells."""
    rows = [record.model_dump(mode="json") for record in trace]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def reports_to_dataframe(reports: Dict[str, MetricsReport]) -> pd.DataFrame:
    """Tabulate reports keyed by label (detector, motion type, ...)."""
    rows = []
    for label, report in reports.items():
        rows.append({
            "run": label,
            "accuracy": report.accuracy,
            "precision": report.precision,
            "recall": report.recall,
            "tp": report.counts.tp,
            "fp": report.counts.fp,
            "tn": report.counts.tn,
            "fn": report.counts.fn,
            "ignored": report.counts.ignored,
        })
    return pd.DataFrame(rows).set_index("run")
