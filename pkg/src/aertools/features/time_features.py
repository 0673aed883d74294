"""Frame-level acoustic descriptors: zero-crossing rate, log-energy, Teager energy and
cepstral pitch, plus their per-utterance summary statistics."""
import csv
import dataclasses
import enum
import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..audio.framing import FrameSeries
from ..errors import EmptySignalError, ParameterError, TooShortError
from ..util import atomic_write

log = logging.getLogger(__name__)

EPSILON = 1e-12
DEFAULT_F_MIN = 60.0
DEFAULT_F_MAX = 400.0
DEFAULT_VOICING_THRESHOLD = 2.5


class TrackKind(str, enum.Enum):
    pitch = "pitch"
    zcr = "zcr"
    log_energy = "log_energy"
    teo_mean = "teo_mean"

    def __str__(self):
        return self.value


def zero_crossing_rate(frame: np.ndarray) -> float:
    """Fraction of adjacent sample pairs whose signs differ; zero counts as positive."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size < 2:
        raise TooShortError(f"ZCR needs at least 2 samples, got {frame.size}")
    positive = frame >= 0
    return np.count_nonzero(positive[1:] != positive[:-1]) / (frame.size - 1)


def log_energy(frame: np.ndarray, eps: float = EPSILON) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if frame.size == 0:
        raise EmptySignalError("Cannot take the energy of an empty frame")
    return math.log(eps + float(np.dot(frame, frame)))


def teager_energy(frame: np.ndarray) -> np.ndarray:
    """Teager energy x[n]^2 - x[n+1]x[n-1] for n = 1 .. len(frame) - 2."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size < 3:
        raise TooShortError(f"TEO needs at least 3 samples, got {frame.size}")
    return frame[1:-1] ** 2 - frame[2:] * frame[:-2]


def pitch_cepstral(
    frame: np.ndarray,
    sample_rate: float,
    f_min: float = DEFAULT_F_MIN,
    f_max: float = DEFAULT_F_MAX,
    voicing_threshold: float = DEFAULT_VOICING_THRESHOLD,
    eps: float = EPSILON,
) -> Optional[float]:
    """Estimate the fundamental frequency of `frame` from its real cepstrum.

    The frame is scaled to unit RMS and zero-padded to a power of two. The cepstrum is
    the inverse transform of log(|X| + eps); the strongest quefrency within
    [sample_rate / f_max, sample_rate / f_min] (clipped below n_fft / 2) is the pitch
    period when its value is at least `voicing_threshold` times the RMS of the whole
    cepstrum.

    A pure sinusoid has no harmonic comb in its log spectrum, so it produces no cepstral
    peak and is reported unvoiced. Frames too short to hold one period of `f_max` are
    unvoiced as well.

    Returns:
        Pitch in Hz, or None for an unvoiced frame.

    Raises:
        ParameterError: If the search band is invalid for `sample_rate`.
    """
    if not 0 < f_min < f_max < sample_rate / 2:
        raise ParameterError(
            f"Invalid pitch band [{f_min}, {f_max}] Hz for sample rate {sample_rate}"
        )
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size < 2:
        raise TooShortError(
            f"Pitch analysis needs at least 2 samples, got {frame.size}"
        )
    n_fft = 1 << (frame.size - 1).bit_length()
    q_lo = int(math.ceil(sample_rate / f_max))
    q_hi = min(int(math.floor(sample_rate / f_min)), n_fft // 2 - 1)
    if q_lo > q_hi:
        log.debug(
            f"Frame of {frame.size} samples cannot resolve pitch below"
            f" {sample_rate / max(n_fft // 2 - 1, 1):.1f} Hz; treating it as unvoiced"
        )
        return None
    rms = math.sqrt(float(np.mean(frame ** 2)))
    if rms == 0.0:
        return None
    spectrum = np.abs(np.fft.rfft(frame / rms, n_fft))
    cepstrum = np.fft.irfft(np.log(spectrum + eps), n_fft)
    band = cepstrum[q_lo : q_hi + 1]
    peak = int(np.argmax(band))
    ratio = band[peak] / math.sqrt(float(np.mean(cepstrum ** 2)))
    if ratio < voicing_threshold:
        return None
    return sample_rate / (q_lo + peak)


@dataclasses.dataclass(frozen=True)
class FrameFeatureTrack:
    """One descriptor value per frame. Unvoiced pitch frames hold NaN."""

    values: np.ndarray
    kind: TrackKind

    def __len__(self) -> int:
        return self.values.size

    @property
    def voiced(self) -> np.ndarray:
        return np.isfinite(self.values)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write `frame_index,value` rows; unvoiced frames get an empty value."""
        path = Path(path)
        with atomic_write(path, newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(("frame_index", "value"))
            for i, v in enumerate(self.values):
                writer.writerow((i, repr(float(v)) if np.isfinite(v) else ""))
        return path


def compute_track(
    series: FrameSeries,
    kind: Union[TrackKind, str],
    sample_rate: Optional[float] = None,
    f_min: float = DEFAULT_F_MIN,
    f_max: float = DEFAULT_F_MAX,
    voicing_threshold: float = DEFAULT_VOICING_THRESHOLD,
    eps: float = EPSILON,
) -> FrameFeatureTrack:
    kind = TrackKind(kind)
    if kind is TrackKind.zcr:
        values = [zero_crossing_rate(f) for f in series]
    elif kind is TrackKind.log_energy:
        values = [log_energy(f, eps) for f in series]
    elif kind is TrackKind.teo_mean:
        values = [float(np.mean(teager_energy(f))) for f in series]
    else:
        if sample_rate is None:
            raise ParameterError("Pitch tracks require the sample rate")
        values = []
        for f in series:
            pitch = pitch_cepstral(f, sample_rate, f_min, f_max, voicing_threshold, eps)
            values.append(np.nan if pitch is None else pitch)
    values = np.asarray(values, dtype=np.float64)
    values.setflags(write=False)
    return FrameFeatureTrack(values=values, kind=kind)


@dataclasses.dataclass(frozen=True)
class TrackStats:
    mean: float
    std: float
    min: float
    max: float
    median: float
    present: bool = True

    @classmethod
    def absent(cls) -> "TrackStats":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, present=False)


def track_stats(track: FrameFeatureTrack) -> TrackStats:
    """Summary statistics of a track; pitch uses voiced frames only.

    The standard deviation uses the n-1 denominator (0 for a single value). A pitch
    track without voiced frames yields `TrackStats.absent()`.

    Raises:
        EmptySignalError: If the track has no frames.
    """
    if len(track) == 0:
        raise EmptySignalError(f"Empty {track.kind} track")
    values = track.values
    if track.kind is TrackKind.pitch:
        values = values[track.voiced]
        if values.size == 0:
            return TrackStats.absent()
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return TrackStats(
        mean=float(np.mean(values)),
        std=std,
        min=float(np.min(values)),
        max=float(np.max(values)),
        median=float(np.median(values)),
    )
