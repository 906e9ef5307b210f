"""Seeded property checks over randomly generated frames."""

import numpy as np
import pytest

from slipsense.contact import full_slip_torque, hertz_pressure, torsional_partial_slip
from slipsense.detection import classify_frame, stick_ratio
from slipsense.frame_io import read_sequence, write_sequence
from slipsense.models import ContactParams, DetectorConfig, ForceFrame, LabeledSequence, TaxelGridSpec
from slipsense.taxels import aggregate_forces, net_moment_z

SEEDS = range(100)
EXACT = DetectorConfig(contact_epsilon=0.0)


def random_frame(rng, n=None, timestamp=0.0):
    n = n or int(rng.integers(3, 9))
    fz = rng.uniform(0.0, 1.0, (n, n))
    fz[rng.random((n, n)) < 0.3] = 0.0
    return ForceFrame(
        timestamp=timestamp,
        fx=rng.normal(0.0, 0.5, (n, n)),
        fy=rng.normal(0.0, 0.5, (n, n)),
        fz=fz,
    )


def grid_for(frame):
    return TaxelGridSpec(n=frame.n, pitch=1.5)


def rotated(frame):
    """The same contact turned 90 degrees counter-clockwise about the grid centre."""
    return ForceFrame(
        timestamp=frame.timestamp,
        fx=np.rot90(-frame.fy),
        fy=np.rot90(frame.fx),
        fz=np.rot90(frame.fz),
    )


@pytest.mark.parametrize("seed", SEEDS)
def test_decisions_are_scale_invariant(seed):
    frame = random_frame(np.random.default_rng(seed))
    reference = stick_ratio(frame, EXACT)
    for factor in (0.1, 1.0, 10.0):
        scaled = frame.scaled(factor)
        assert stick_ratio(scaled, EXACT) == reference
        for kind in ("baseline", "stick_ratio"):
            assert classify_frame(scaled, EXACT, kind) == classify_frame(frame, EXACT, kind)


@pytest.mark.parametrize("seed", SEEDS)
def test_stick_ratio_bounds_and_friction_monotonicity(seed):
    frame = random_frame(np.random.default_rng(seed))
    previous = None
    for mu in (0.1, 0.3, 0.45, 0.8, 2.0):
        result = stick_ratio(frame, DetectorConfig(mu=mu, contact_epsilon=0.0))
        assert result.stick_count <= result.contact_count
        if result.sr is not None:
            assert 0.0 <= result.sr <= 1.0
            if previous is not None:
                assert result.sr >= previous
            previous = result.sr


@pytest.mark.parametrize("seed", SEEDS)
def test_rotation_equivariance(seed):
    frame = random_frame(np.random.default_rng(seed))
    turned = rotated(frame)
    grid = grid_for(frame)
    before = aggregate_forces(frame, grid)
    after = aggregate_forces(turned, grid)

    assert after.F_N == pytest.approx(before.F_N, rel=1e-12, abs=1e-12)
    assert after.F_x == pytest.approx(-before.F_y, rel=1e-9, abs=1e-12)
    assert after.F_y == pytest.approx(before.F_x, rel=1e-9, abs=1e-12)
    assert after.F_T == pytest.approx(before.F_T, rel=1e-9, abs=1e-12)
    assert after.M == pytest.approx(before.M, rel=1e-9, abs=1e-9)
    assert stick_ratio(turned, EXACT) == stick_ratio(frame, EXACT)


@pytest.mark.parametrize("seed", SEEDS)
def test_aggregates_are_linear(seed):
    rng = np.random.default_rng(seed)
    first = random_frame(rng)
    second = random_frame(rng, n=first.n)
    grid = grid_for(first)
    combined = ForceFrame(
        timestamp=0.0, fx=first.fx + second.fx, fy=first.fy + second.fy, fz=first.fz + second.fz
    )
    a, b, total = aggregate_forces(first, grid), aggregate_forces(second, grid), aggregate_forces(combined, grid)
    for name in ("F_N", "F_x", "F_y", "M"):
        assert getattr(total, name) == pytest.approx(getattr(a, name) + getattr(b, name), rel=1e-9, abs=1e-9)

    factor = float(rng.uniform(0.1, 10.0))
    scaled = aggregate_forces(first.scaled(factor), grid)
    for name in ("F_N", "F_x", "F_y", "F_T", "M"):
        assert getattr(scaled, name) == pytest.approx(factor * getattr(a, name), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("seed", SEEDS)
def test_torsional_moment_tracks_command(seed):
    rng = np.random.default_rng(seed)
    grid = TaxelGridSpec(n=20, pitch=1.5)
    params = ContactParams(a=float(rng.uniform(6.0, 10.5)), P=float(rng.uniform(1.0, 20.0)), mu=0.45)
    ratio = float(rng.uniform(0.05, 0.9))
    Mz = ratio * full_slip_torque(params, grid)
    fx, fy = torsional_partial_slip(params, Mz, grid)
    frame = ForceFrame(timestamp=0.0, fx=fx, fy=fy, fz=hertz_pressure(params, grid))
    assert net_moment_z(frame, grid) == pytest.approx(Mz, rel=0.03)


@pytest.mark.parametrize("seed", range(10))
def test_file_round_trip(seed, tmp_path):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 12))
    frames = [random_frame(rng, n=n, timestamp=k / 100) for k in range(int(rng.integers(0, 6)))]
    sequence = LabeledSequence(grid=TaxelGridSpec(n=n, pitch=0.5), frame_rate=100.0, frames=frames)
    path = tmp_path / f"random-{seed}.taxfrm"
    write_sequence(sequence, path)
    restored = read_sequence(path)
    assert len(restored.frames) == len(frames)
    for a, b in zip(frames, restored.frames):
        assert b.timestamp == a.timestamp
        assert np.array_equal(b.fz, a.fz.astype(np.float32))
        assert np.array_equal(b.fx, a.fx.astype(np.float32))
