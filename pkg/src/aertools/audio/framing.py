import dataclasses
import enum
from typing import Union

import numpy as np
from scipy.signal import get_window

from ..errors import ParameterError, TooShortError
from .clip import AudioClip


class WindowKind(str, enum.Enum):
    rectangular = "rectangular"
    hamming = "hamming"

    def __str__(self):
        return self.value

    def coefficients(self, length: int) -> np.ndarray:
        name = "boxcar" if self is WindowKind.rectangular else "hamming"
        return get_window(name, length, fftbins=False)


@dataclasses.dataclass(frozen=True)
class FrameSeries:
    """Fixed-length, possibly overlapping analysis frames of a signal.

    Attributes:
        frames: Read-only array of shape (count, frame_len); frame i starts at i * hop.
        frame_len: Samples per frame.
        hop: Samples between consecutive frame starts.
        window_kind: Window applied multiplicatively to every frame.
    """

    frames: np.ndarray
    frame_len: int
    hop: int
    window_kind: WindowKind

    @property
    def count(self) -> int:
        return self.frames.shape[0]

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return iter(self.frames)


def frame_signal(
    clip: Union[AudioClip, np.ndarray],
    frame_len: int,
    hop: int,
    window_kind: WindowKind = WindowKind.rectangular,
) -> FrameSeries:
    """Cut `clip` into frames covering [i*hop, i*hop + frame_len).

    Trailing samples that do not fill a whole frame are dropped, giving
    floor((N - frame_len) / hop) + 1 frames.

    Raises:
        ParameterError: If `frame_len` or `hop` is below 1.
        TooShortError: If the signal is shorter than one frame.
    """
    samples = clip.samples if isinstance(clip, AudioClip) else np.asarray(clip, float)
    if frame_len < 1 or hop < 1:
        raise ParameterError(f"frame_len ({frame_len}) and hop ({hop}) must be >= 1")
    if samples.size < frame_len:
        raise TooShortError(
            f"Signal of {samples.size} samples is shorter than one frame ({frame_len})"
        )
    window_kind = WindowKind(window_kind)
    views = np.lib.stride_tricks.sliding_window_view(samples, frame_len)[::hop]
    frames = views * window_kind.coefficients(frame_len)
    frames.setflags(write=False)
    return FrameSeries(
        frames=frames, frame_len=frame_len, hop=hop, window_kind=window_kind
    )
