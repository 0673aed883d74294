import dataclasses
import logging
import warnings
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy.io import wavfile

from ..emotion import Emotion
from ..errors import (
    EmptySignalError,
    FormatError,
    ParameterError,
    UnsupportedCodecError,
)
from ..util import atomic_write

log = logging.getLogger(__name__)

_AMPLITUDE_TOLERANCE = 1e-6


@dataclasses.dataclass(frozen=True)
class AudioClip:
    """A mono utterance with amplitudes normalised to [-1, 1].

    Attributes:
        samples: Read-only float64 amplitudes.
        sample_rate: Sampling frequency in Hz.
        speaker: Speaker identifier; None until labelled from a manifest.
        emotion: Emotion label; None until labelled from a manifest.
        source_path: Where the samples came from (informational only).
    """

    samples: np.ndarray
    sample_rate: int
    speaker: Optional[str] = None
    emotion: Optional[Emotion] = None
    source_path: str = ""

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if samples.size == 0:
            raise EmptySignalError(f"Clip '{self.source_path}' holds no samples")
        if not np.all(np.isfinite(samples)):
            raise FormatError(f"Clip '{self.source_path}' holds non-finite samples")
        peak = float(np.max(np.abs(samples)))
        if peak > 1 + _AMPLITUDE_TOLERANCE:
            raise ParameterError(
                f"Clip '{self.source_path}' is not normalised (peak amplitude {peak})"
            )
        if int(self.sample_rate) <= 0:
            raise ParameterError(f"Invalid sample rate {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def with_labels(self, speaker: str, emotion: Emotion) -> "AudioClip":
        return dataclasses.replace(self, speaker=speaker, emotion=emotion)


def _normalise(data: np.ndarray) -> np.ndarray:
    # scale by the sample type's maximum magnitude, not the file's peak, so that
    # energy differences between utterances survive
    if data.dtype == np.uint8:
        return (data.astype(np.float64) - 128.0) / 128.0
    if np.issubdtype(data.dtype, np.integer):
        return data.astype(np.float64) / float(-np.iinfo(data.dtype).min)
    if np.issubdtype(data.dtype, np.floating):
        out = data.astype(np.float64)
        peak = np.max(np.abs(out)) if out.size else 0.0
        if peak > 1 + _AMPLITUDE_TOLERANCE:
            log.warning(f"Float samples exceed full scale (peak {peak}); clipping")
            out = np.clip(out, -1.0, 1.0)
        return out
    raise UnsupportedCodecError(f"Unsupported sample type {data.dtype}")


def read_wav(path: Union[str, Path]) -> AudioClip:
    """Decode a PCM or IEEE-float WAV file into an unlabelled mono `AudioClip`.

    Multichannel data is averaged to mono; integer samples are divided by the type's
    maximum magnitude (8-bit unsigned data is re-centred first).

    Raises:
        FormatError: If the RIFF/WAVE structure is malformed.
        UnsupportedCodecError: If the file uses a compressed or otherwise non-PCM codec.
        EmptySignalError: If the data chunk holds no samples.
    """
    path = Path(path)
    try:
        with warnings.catch_warnings():
            # unknown chunks (LIST, bext, ...) are harmless for our purposes
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except ValueError as e:
        message = str(e)
        if "Unknown wave file format" in message or "Unsupported bit depth" in message:
            raise UnsupportedCodecError(f"'{path}': {message}") from e
        raise FormatError(f"'{path}': {message}") from e
    except EOFError as e:
        raise FormatError(f"'{path}': truncated file ({e})") from e
    if data.size == 0:
        raise EmptySignalError(f"'{path}' contains no samples")
    if data.ndim == 2:
        samples = _normalise(data).mean(axis=1)
    else:
        samples = _normalise(data)
    return AudioClip(samples=samples, sample_rate=rate, source_path=str(path))


def write_wav(clip: AudioClip, path: Union[str, Path]) -> Path:
    """Encode `clip` as 16-bit mono PCM at `path`, atomically."""
    path = Path(path)
    scaled = np.clip(np.round(clip.samples * 32768.0), -32768, 32767).astype(np.int16)
    with atomic_write(path, "wb") as f:
        wavfile.write(f, clip.sample_rate, scaled)
    return path
