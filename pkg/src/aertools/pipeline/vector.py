"""Per-utterance feature vectors: fractal dimensions of every wavelet sub-band plus the
energy/TEO screening statistics."""
import dataclasses
import enum
import logging
from typing import TYPE_CHECKING, List, Optional, Tuple

import numpy as np

from ..audio.clip import AudioClip
from ..audio.framing import WindowKind, frame_signal
from ..errors import DegenerateSignalError, ShapeError, TooShortError
from ..features.fractal import FdMethod, estimate_fd
from ..features.time_features import TrackKind, compute_track, track_stats
from ..features.wavelet import filter_coeffs, wavedec

if TYPE_CHECKING:
    from ..config import FdConfig, FrameConfig, WaveletConfig

log = logging.getLogger(__name__)

LAYOUT_VERSION = 1
# stands in for FDs that cannot be estimated; the smooth-curve limit
DEGENERATE_FD = 1.0
SCREEN_FEATURES = ("le_mean", "le_std", "teo_mean", "teo_std", "zcr_mean", "pitch_mean")


class FdBands(str, enum.Enum):
    """Which FD entries feed the classifier; the raw-signal FD is always included."""

    all = "all"
    approx = "approx"
    detail = "detail"

    def __str__(self):
        return self.value


def fd_feature_names(levels: int) -> List[str]:
    return (
        [f"fd_d{j}" for j in range(1, levels + 1)]
        + [f"fd_a{j}" for j in range(1, levels + 1)]
        + ["fd_raw"]
    )


def feature_names(levels: int) -> List[str]:
    return fd_feature_names(levels) + list(SCREEN_FEATURES)


def band_indices(levels: int, bands: FdBands) -> np.ndarray:
    """Positions within `fd_features` selected by `bands`."""
    bands = FdBands(bands)
    raw = [2 * levels]
    if bands is FdBands.detail:
        return np.array(list(range(levels)) + raw)
    if bands is FdBands.approx:
        return np.array(list(range(levels, 2 * levels)) + raw)
    return np.arange(2 * levels + 1)


@dataclasses.dataclass(frozen=True)
class FeatureVector:
    """Layout v1: `fd_features` = fd_d1..fd_dJ, fd_a1..fd_aJ, fd_raw (2J + 1 values);
    `screen_features` = le_mean, le_std, teo_mean, teo_std, zcr_mean, pitch_mean, where
    a pitch_mean of 0.0 flags an utterance without voiced frames.

    Attributes:
        degenerate: Names of FD entries replaced by `DEGENERATE_FD`.
    """

    fd_features: np.ndarray
    screen_features: np.ndarray
    levels: int
    layout_version: int = LAYOUT_VERSION
    degenerate: Tuple[str, ...] = ()

    def __post_init__(self):
        fd = np.array(self.fd_features, dtype=np.float64).reshape(-1)
        screen = np.array(self.screen_features, dtype=np.float64).reshape(-1)
        if fd.size != 2 * self.levels + 1 or screen.size != len(SCREEN_FEATURES):
            raise ShapeError(
                f"Feature vector of {fd.size}+{screen.size} values does not match"
                f" layout v{self.layout_version} with J={self.levels}"
            )
        if not (np.all(np.isfinite(fd)) and np.all(np.isfinite(screen))):
            raise ShapeError("Feature vectors must be finite")
        fd.setflags(write=False)
        screen.setflags(write=False)
        object.__setattr__(self, "fd_features", fd)
        object.__setattr__(self, "screen_features", screen)

    def __len__(self) -> int:
        return self.fd_features.size + self.screen_features.size

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FeatureVector)
            and self.levels == other.levels
            and self.layout_version == other.layout_version
            and np.array_equal(self.fd_features, other.fd_features)
            and np.array_equal(self.screen_features, other.screen_features)
        )

    @property
    def names(self) -> List[str]:
        return feature_names(self.levels)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.fd_features, self.screen_features])

    def screen(self, name: str) -> float:
        return float(self.screen_features[SCREEN_FEATURES.index(name)])


def _fd_or_sentinel(
    series: np.ndarray, method: FdMethod, k_max: int, name: str, degenerate: List[str]
) -> float:
    try:
        return estimate_fd(series, method, k_max)
    except (DegenerateSignalError, TooShortError) as e:
        degenerate.append(name)
        log.debug(f"{name}: {e}")
        return DEGENERATE_FD


def screening_statistics(clip: AudioClip, frame_config: "FrameConfig") -> np.ndarray:
    """le_mean, le_std, teo_mean, teo_std, zcr_mean, pitch_mean of a clip."""
    frame_len, hop = frame_config.frame_len, frame_config.hop
    if len(clip) < frame_len:
        log.warning(
            f"'{clip.source_path}' ({len(clip)} samples) is shorter than one frame"
            f" ({frame_len}); analysing it as a single frame"
        )
        frame_len = hop = max(len(clip), 3)
    rect = frame_signal(clip, frame_len, hop, WindowKind.rectangular)
    hamming = frame_signal(clip, frame_len, hop, WindowKind.hamming)
    energy = track_stats(
        compute_track(rect, TrackKind.log_energy, eps=frame_config.eps)
    )
    teo = track_stats(compute_track(rect, TrackKind.teo_mean))
    zcr = track_stats(compute_track(rect, TrackKind.zcr))
    pitch = track_stats(
        compute_track(
            hamming,
            TrackKind.pitch,
            sample_rate=clip.sample_rate,
            f_min=frame_config.f_min,
            f_max=min(frame_config.f_max, clip.sample_rate / 2 * 0.99),
            voicing_threshold=frame_config.voicing_threshold,
            eps=frame_config.eps,
        )
    )
    pitch_mean = pitch.mean if pitch.present else 0.0
    return np.array(
        [energy.mean, energy.std, teo.mean, teo.std, zcr.mean, pitch_mean]
    )


def extract_features(
    clip: AudioClip,
    wavelet_config: "WaveletConfig",
    fd_config: "FdConfig",
    frame_config: "FrameConfig",
) -> FeatureVector:
    """Compute the feature vector of one utterance.

    Fractal dimensions are taken over whole coefficient sequences (no sliding windows).
    Bands whose FD cannot be estimated, and levels dropped because the clip is too short
    for the configured depth, receive `DEGENERATE_FD` with a warning.
    """
    levels = wavelet_config.levels
    method, k_max = fd_config.method, fd_config.k_max
    filter = filter_coeffs(wavelet_config.family)
    min_length = 2 * k_max if FdMethod(method) is FdMethod.higuchi else 3
    degenerate: List[str] = []
    try:
        decomposition: Optional[object] = wavedec(
            clip.samples, filter, wavelet_config.mode, levels, min_length=min_length
        )
    except TooShortError as e:
        log.warning(f"'{clip.source_path}': {e}")
        decomposition = None
    computed = decomposition.levels if decomposition is not None else 0

    details, approximations = [], []
    for j in range(1, levels + 1):
        if j <= computed:
            details.append(
                _fd_or_sentinel(
                    decomposition.details[j - 1], method, k_max, f"fd_d{j}", degenerate
                )
            )
            approximations.append(
                _fd_or_sentinel(
                    decomposition.approximations[j - 1],
                    method,
                    k_max,
                    f"fd_a{j}",
                    degenerate,
                )
            )
        else:
            degenerate.extend((f"fd_d{j}", f"fd_a{j}"))
            details.append(DEGENERATE_FD)
            approximations.append(DEGENERATE_FD)
    raw = _fd_or_sentinel(
        clip.samples, method, fd_config.k_max_raw, "fd_raw", degenerate
    )
    if degenerate:
        log.warning(
            f"'{clip.source_path}': no usable FD for {', '.join(degenerate)};"
            f" substituting {DEGENERATE_FD}"
        )
    return FeatureVector(
        fd_features=np.array(details + approximations + [raw]),
        screen_features=screening_statistics(clip, frame_config),
        levels=levels,
        degenerate=tuple(degenerate),
    )
