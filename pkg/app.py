import logging

import streamlit as st

from slipsense.config import config
from slipsense.evaluation import compare_detectors, score_by_motion
from slipsense.exceptions import SlipSenseException, handle_exception
from slipsense.models import ContactParams, DetectorConfig, LabeledSequence, TaxelGridSpec
from slipsense.scenarios import generate_scenario, get_preset, list_presets
from slipsense.utils import reports_to_dataframe, setup_logging, trace_to_dataframe

# --- Setup ---
setup_logging()
logger = logging.getLogger(__name__)


# --- Page ---
def setup_page():
    st.set_page_config(page_title="Slip Detection", layout="wide")


@st.cache_resource(show_spinner=False)
def simulate(scenario: str, seed: int, n: int, noise_sigma: float, load: float) -> LabeledSequence:
    # Finer grids keep the default sensor side length.
    grid = TaxelGridSpec(n=n, pitch=config.GRID_N * config.TAXEL_PITCH_MM / n)
    params = ContactParams(P=load)
    spec = get_preset(scenario, noise_sigma=noise_sigma)
    return generate_scenario(spec, params, grid, seed)


# --- UI Components ---
def sidebar_controls() -> dict:
    with st.sidebar:
        st.header("Scenario")
        scenario = st.selectbox("Preset", list_presets(), index=list_presets().index(config.DEFAULT_SCENARIO))
        seed = st.number_input("Seed", min_value=0, value=0, step=1)
        n = st.select_slider("Taxels per side", options=sorted({20, 40, 80, config.GRID_N}), value=config.GRID_N)
        noise_sigma = st.number_input("Noise sigma (N)", min_value=0.0, value=config.NOISE_SIGMA_N, step=0.001, format="%.4f")
        load = st.number_input("Normal load (N)", min_value=0.1, value=config.NORMAL_LOAD_N)

        st.header("Detector")
        mu = st.number_input("Friction coefficient", min_value=0.01, value=config.FRICTION_COEFFICIENT)
        sr_threshold = st.slider("Stick ratio threshold", 0.0, 1.0, config.SR_THRESHOLD)
        epsilon = st.number_input(
            "Contact threshold (N)",
            min_value=0.0,
            value=max(config.CONTACT_EPSILON_N, 4 * noise_sigma),
            step=0.001,
            format="%.4f",
        )
        debounce = st.number_input("Debounce frames", min_value=1, value=config.DEBOUNCE_K, step=1)
    return dict(
        scenario=scenario,
        seed=int(seed),
        n=int(n),
        noise_sigma=float(noise_sigma),
        load=float(load),
        detector_config=DetectorConfig(
            mu=mu, sr_threshold=sr_threshold, contact_epsilon=epsilon, debounce_k=int(debounce)
        ),
    )


def display_reports(sequence: LabeledSequence, detector_config: DetectorConfig):
    comparison = compare_detectors(sequence, detector_config, run_id=sequence.name)

    columns = st.columns(2)
    for column, (label, report) in zip(columns, comparison.reports().items()):
        with column:
            st.subheader(label.replace("_", " ").title())
            for metric in ("accuracy", "precision", "recall"):
                value = getattr(report, metric)
                st.metric(metric.title(), "n/a" if value is None else f"{value:.3f}")

    st.subheader("By motion type")
    by_motion = {}
    for kind in ("baseline", "stick_ratio"):
        predictions = [getattr(record, f"state_{kind}") for record in comparison.trace]
        for motion, report in score_by_motion(predictions, sequence, kind, detector_config).items():
            by_motion[f"{kind}/{motion}"] = report
    st.dataframe(reports_to_dataframe(by_motion))

    st.subheader("Trace")
    trace_df = trace_to_dataframe(comparison.trace)
    st.dataframe(trace_df, use_container_width=True)
    st.download_button(
        "Download trace CSV",
        trace_df.to_csv(index=False).encode("utf-8"),
        file_name=f"{sequence.name}_trace.csv",
        mime="text/csv",
    )


def main():
    setup_page()
    st.title("Tactile Slip Detection")
    st.markdown(
        "Simulate a grasp on the taxel grid and compare the total-force Coulomb baseline "
        "with the per-taxel stick-ratio detector against analytic ground truth."
    )
    controls = sidebar_controls()

    if st.button("Run"):
        with st.status("Simulating scenario...", expanded=True) as status:
            try:
                sequence = simulate(
                    controls["scenario"], controls["seed"], controls["n"], controls["noise_sigma"], controls["load"]
                )
                status.write(
                    f"Generated {len(sequence.frames)} frames of {sequence.grid.taxel_count} taxels "
                    f"with {len(sequence.slip_intervals())} slip intervals"
                )
                status.update(label="Simulation complete", state="complete", expanded=False)
            except SlipSenseException as e:
                logger.error(handle_exception(e, "simulation"))
                status.update(label="Simulation failed.", state="error", expanded=True)
                st.error(handle_exception(e, "simulation"))
                return
        display_reports(sequence, controls["detector_config"])


if __name__ == "__main__":
    main()
