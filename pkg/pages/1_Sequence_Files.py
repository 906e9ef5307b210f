import logging
import tempfile
from pathlib import Path

import streamlit as st

from slipsense.config import config
from slipsense.evaluation import build_trace, score_run
from slipsense.exceptions import SlipSenseException, handle_exception
from slipsense.frame_io import labels_path, read_sequence
from slipsense.models import DetectorConfig
from slipsense.utils import reports_to_dataframe, setup_logging, trace_to_dataframe

# --- Setup ---
setup_logging()
logger = logging.getLogger(__name__)


def main():
    st.set_page_config(page_title="Sequence Files", layout="wide")
    st.title("🗂️ Inspect a Frame File")

    st.markdown(
        """
        Upload a `.taxfrm` frame file, optionally with its `.labels` sidecar, to run both
        slip detectors over the recorded frames. Metrics are shown when labels are present.
        """
    )

    frame_file = st.file_uploader("Frame file", type=config.FRAME_FILE_SUFFIX.lstrip("."))
    labels_file = st.file_uploader("Labels (optional)", type=config.LABELS_SUFFIX.lstrip("."))
    epsilon = st.number_input("Contact threshold (N)", min_value=0.0, value=config.CONTACT_EPSILON_N, format="%.4f")

    if not st.button("Analyze") or frame_file is None:
        return

    with st.status("Reading frame file...", expanded=True) as status:
        try:
            with tempfile.TemporaryDirectory() as tmp:
                path = Path(tmp) / frame_file.name
                path.write_bytes(frame_file.getvalue())
                if labels_file is not None:
                    labels_path(path).write_bytes(labels_file.getvalue())
                sequence = read_sequence(path)
            status.write(
                f"n={sequence.grid.n}, pitch {sequence.grid.pitch:g} mm, "
                f"{len(sequence.frames)} frames at {sequence.frame_rate:g} Hz, "
                f"{len(sequence.truth)} truth intervals"
            )

            detector_config = DetectorConfig(contact_epsilon=epsilon)
            trace, predictions = build_trace(sequence, detector_config)
            status.update(label="Analysis complete", state="complete", expanded=False)
        except SlipSenseException as e:
            logger.error(handle_exception(e, "frame file"))
            status.update(label="Could not read the frame file.", state="error", expanded=True)
            st.error(handle_exception(e, "frame file"))
            return

    if sequence.truth:
        reports = {
            kind: score_run(decisions, sequence, kind, detector_config, sequence.name)
            for kind, decisions in predictions.items()
        }
        st.subheader("Scores")
        st.dataframe(reports_to_dataframe(reports))
    else:
        st.info("No labels provided; showing decisions only.")

    st.subheader("Trace")
    st.dataframe(trace_to_dataframe(trace), use_container_width=True)


if __name__ == "__main__":
    main()
