"""Binary ``.taxfrm`` frame files, ``.labels`` sidecars and paced replay.

Layout (little-endian)::

    header   8s magic "TAXFRM01" | u16 n | f32 pitch_mm | u32 frame_count | f32 frame_rate_hz
    frame    f64 timestamp | 3*n*n f32 (all fx row-major, then all fy, then all fz)

The sidecar ``<name>.labels`` holds one ``start_s,end_s,state`` line per truth interval.
"""

import logging
import struct
import time
from pathlib import Path
from typing import Iterable, Iterator, List, Union

import numpy as np
from pydantic import ValidationError

from slipsense.config import config
from slipsense.exceptions import (
    BadMagicException,
    FrameFileException,
    HeaderMismatchException,
    NonFiniteValueException,
    TruncatedPayloadException,
)
from slipsense.models import FrameFileHeader, ForceFrame, LabeledSequence, SlipState, TaxelGridSpec, TruthInterval

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
HEADER = struct.Struct("<8sHfIf")


def frame_dtype(n: int) -> np.dtype:
    """Structured dtype of one frame record for an n x n grid."""
    return np.dtype([("timestamp", "<f8"), ("forces", "<f4", (3 * n * n,))])


def labels_path(path: PathLike) -> Path:
    return Path(path).with_suffix(config.LABELS_SUFFIX)


def expected_file_size(n: int, frame_count: int) -> int:
    return HEADER.size + frame_count * frame_dtype(n).itemsize


def pack_header(header: FrameFileHeader) -> bytes:
    return HEADER.pack(header.magic, header.n, header.pitch_mm, header.frame_count, header.frame_rate_hz)


def unpack_header(data: bytes) -> FrameFileHeader:
    """Parse and validate the fixed-size header at the start of ``data``.

    Raises:
        TruncatedPayloadException: If ``data`` is shorter than a header
        BadMagicException: If the magic tag does not match
        HeaderMismatchException: If a header field is out of range
    """
    if len(data) < HEADER.size:
        raise TruncatedPayloadException("File is shorter than the frame file header", HEADER.size, len(data))
    magic, n, pitch, count, rate = HEADER.unpack_from(data)
    if magic != config.FRAME_FILE_MAGIC:
        raise BadMagicException(f"Bad magic {magic!r}, expected {config.FRAME_FILE_MAGIC!r}")
    try:
        return FrameFileHeader(magic=magic, n=n, pitch_mm=pitch, frame_count=count, frame_rate_hz=rate)
    except ValidationError as e:
        raise HeaderMismatchException(f"Invalid frame file header: {e}") from e


def write_labels(truth: Iterable[TruthInterval], path: PathLike) -> None:
    lines = [f"{interval.start!r},{interval.end!r},{interval.state.value}\n" for interval in truth]
    Path(path).write_text("".join(lines))


def read_labels(path: PathLike) -> List[TruthInterval]:
    """Load truth intervals, skipping malformed lines with a warning."""
    intervals = []
    with open(path, "r") as f:
        for i, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                start, end, state = line.split(",")
                intervals.append(TruthInterval(start=float(start), end=float(end), state=SlipState(state.strip())))
            except (ValueError, ValidationError) as e:
                logger.warning(f"Skipping malformed label line {i} in {path}: {e}")
    return intervals


def write_sequence(sequence: LabeledSequence, path: PathLike) -> None:
    """Write frames to ``path`` and truth intervals to its ``.labels`` sidecar.

    Raises:
        HeaderMismatchException: If the sequence cannot be described by a header
        FrameFileException: If writing fails
    """
    n = sequence.grid.n
    for i, frame in enumerate(sequence.frames):
        if frame.n != n:
            raise HeaderMismatchException(f"Frame {i} is {frame.n}x{frame.n}, header declares n={n}")
    try:
        header = FrameFileHeader(
            n=n,
            pitch_mm=sequence.grid.pitch,
            frame_count=len(sequence.frames),
            frame_rate_hz=sequence.frame_rate,
        )
    except ValidationError as e:
        raise HeaderMismatchException(f"Sequence does not fit the frame file header: {e}") from e

    records = np.zeros(len(sequence.frames), dtype=frame_dtype(n))
    for i, frame in enumerate(sequence.frames):
        records["timestamp"][i] = frame.timestamp
        records["forces"][i] = np.concatenate([frame.fx.ravel(), frame.fy.ravel(), frame.fz.ravel()])

    path = Path(path)
    try:
        with open(path, "wb") as f:
            f.write(pack_header(header))
            f.write(records.tobytes())
        write_labels(sequence.truth, labels_path(path))
    except OSError as e:
        raise FrameFileException(f"Failed to write {path}: {e}") from e
    logger.info(f"Wrote {len(sequence.frames)} frames ({path.stat().st_size} bytes) to {path}")


def read_sequence(path: PathLike) -> LabeledSequence:
    """Read a frame file and its optional ``.labels`` sidecar.

    Raises:
        BadMagicException: If the magic tag does not match
        TruncatedPayloadException: If the payload is shorter than the header declares
        HeaderMismatchException: If there are trailing bytes or invalid header fields
        NonFiniteValueException: If any stored value is NaN or infinite
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise FrameFileException(f"Failed to read {path}: {e}") from e

    header = unpack_header(data)
    n = header.n
    expected = expected_file_size(n, header.frame_count)
    if len(data) < expected:
        raise TruncatedPayloadException(
            f"{path.name} declares {header.frame_count} frames but the payload is short", expected, len(data)
        )
    if len(data) > expected:
        raise HeaderMismatchException(
            f"{path.name} has {len(data) - expected} trailing bytes beyond {header.frame_count} declared frames"
        )

    records = np.zeros(0, dtype=frame_dtype(n))
    if header.frame_count:
        records = np.frombuffer(data, dtype=frame_dtype(n), count=header.frame_count, offset=HEADER.size)
    finite = np.isfinite(records["timestamp"]) & np.all(np.isfinite(records["forces"]), axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise NonFiniteValueException(f"{path.name} frame {bad} contains NaN or infinite values")

    forces = records["forces"].astype(np.float64).reshape(-1, 3, n, n)
    frames = [
        ForceFrame(timestamp=float(t), fx=f[0], fy=f[1], fz=f[2])
        for t, f in zip(records["timestamp"], forces)
    ]

    sidecar = labels_path(path)
    truth = read_labels(sidecar) if sidecar.exists() else []
    try:
        sequence = LabeledSequence(
            name=path.stem,
            grid=TaxelGridSpec(n=n, pitch=header.pitch_mm),
            frame_rate=header.frame_rate_hz,
            frames=frames,
            truth=truth,
        )
    except ValidationError as e:
        raise FrameFileException(f"{path.name} does not hold a valid sequence: {e}") from e
    logger.info(f"Read {len(frames)} frames (n={n}) and {len(truth)} truth intervals from {path}")
    return sequence


def replay_frames(frames: Iterable[ForceFrame], frame_rate: float, realtime: bool = False) -> Iterator[ForceFrame]:
    """Yield frames, sleeping on a monotonic clock to hold ``frame_rate`` when ``realtime``."""
    if not realtime:
        yield from frames
        return
    period = 1.0 / frame_rate
    start = time.perf_counter()
    for k, frame in enumerate(frames):
        wait = start + k * period - time.perf_counter()
        if wait > 0:
            time.sleep(wait)
        yield frame
