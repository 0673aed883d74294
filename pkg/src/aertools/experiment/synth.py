"""Synthetic emotion corpora built from fractional Brownian motion.

Each emotion class is a fBm family with its own Hurst exponent, so its fractal dimension
is 2 - H. Classes also differ in RMS level, and some carry bursts of high-frequency tone
that raise their Teager energy. A corpus is fully determined by its `SynthSpec`.
"""
import dataclasses
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..audio.clip import AudioClip, write_wav
from ..audio.manifest import DatasetManifest, ManifestEntry
from ..emotion import Emotion
from ..errors import ParameterError

log = logging.getLogger(__name__)

# circulant eigenvalues above -tolerance are treated as round-off
EMBEDDING_TOLERANCE = 1e-10
BURSTS_PER_CLIP = 4


def _check_hurst(hurst: float):
    if not 0 < hurst < 1:
        raise ParameterError(f"Hurst exponent must lie in (0, 1), got {hurst}")


def fgn_autocovariance(hurst: float, lags: np.ndarray) -> np.ndarray:
    lags = np.abs(np.asarray(lags, dtype=np.float64))
    h2 = 2 * hurst
    return 0.5 * (np.abs(lags - 1) ** h2 - 2 * lags ** h2 + (lags + 1) ** h2)


def fractional_gaussian_noise(
    n: int, hurst: float, rng: np.random.Generator
) -> np.ndarray:
    """Unit-variance fractional Gaussian noise by Davies-Harte circulant embedding.

    The covariance row is embedded in a circulant of size 2n whose eigenvalues come from
    one FFT. Should any eigenvalue be negative, the sample is drawn instead from the
    Cholesky factor of the exact n x n covariance.
    """
    _check_hurst(hurst)
    if n < 1:
        raise ParameterError(f"Length must be >= 1, got {n}")
    gamma = fgn_autocovariance(hurst, np.arange(n))
    row = np.concatenate([gamma, [0.0], gamma[:0:-1]])
    eigenvalues = np.fft.fft(row).real
    if np.any(eigenvalues < -EMBEDDING_TOLERANCE):
        log.warning(
            f"Circulant embedding of fGn (n={n}, H={hurst}) is not positive;"
            " falling back to Cholesky"
        )
        cov = linalg.toeplitz(gamma)
        return linalg.cholesky(cov, lower=True) @ rng.standard_normal(n)
    m = row.size
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    # Hermitian-symmetric weights make the transform real
    z = rng.standard_normal(m // 2 + 1) + 1j * rng.standard_normal(m // 2 + 1)
    z[0] = z[0].real * np.sqrt(2)
    z[-1] = z[-1].real * np.sqrt(2)
    w = np.empty(m, dtype=complex)
    w[: m // 2 + 1] = z
    w[m // 2 + 1 :] = np.conj(z[1 : m // 2][::-1])
    w *= np.sqrt(eigenvalues / (2 * m))
    return np.fft.fft(w)[:n].real


def fractional_brownian_motion(
    n: int, hurst: float, rng: np.random.Generator
) -> np.ndarray:
    """fBm path of n samples: the cumulative sum of fractional Gaussian noise."""
    return np.cumsum(fractional_gaussian_noise(n, hurst, rng))


@dataclasses.dataclass(frozen=True)
class SynthClass:
    """One synthetic emotion.

    Attributes:
        hurst: Hurst exponent of the class's fBm.
        energy_scale: RMS amplitude of the fBm component.
        teo_burst: Amplitude of the high-frequency tone bursts; 0 disables them.
    """

    emotion: Emotion
    hurst: float
    energy_scale: float
    teo_burst: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "emotion", Emotion(self.emotion))
        _check_hurst(self.hurst)
        if self.energy_scale <= 0 or self.teo_burst < 0:
            raise ParameterError(
                f"Class '{self.emotion}': energy scale must be positive and burst"
                " amplitude non-negative"
            )


# Hurst exponents are spread so that the FD-only classes (fear/happy/surprise) are
# separable; sad and disgust are quiet, angry carries the tone bursts.
DEFAULT_CLASSES = (
    SynthClass(Emotion.angry, hurst=0.8, energy_scale=0.15, teo_burst=0.45),
    SynthClass(Emotion.disgust, hurst=0.5, energy_scale=0.06),
    SynthClass(Emotion.fear, hurst=0.2, energy_scale=0.3),
    SynthClass(Emotion.happy, hurst=0.4, energy_scale=0.3),
    SynthClass(Emotion.sad, hurst=0.3, energy_scale=0.005),
    SynthClass(Emotion.surprise, hurst=0.6, energy_scale=0.3),
)


@dataclasses.dataclass(frozen=True)
class SynthSpec:
    classes: Tuple[SynthClass, ...] = DEFAULT_CLASSES
    per_class_count: int = 60
    length: int = 8192
    seed: int = 0
    sample_rate: int = 8000
    speakers: int = 4

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        emotions = [c.emotion for c in self.classes]
        if len(emotions) < 2 or len(set(emotions)) != len(emotions):
            raise ParameterError("A corpus needs at least 2 distinct emotion classes")
        if self.per_class_count < 2:
            raise ParameterError(
                f"per_class_count must be >= 2, got {self.per_class_count}"
            )
        if self.length < 64 or self.sample_rate <= 0 or self.speakers < 1:
            raise ParameterError("Invalid clip length, sample rate or speaker count")

    def speaker_id(self, index: int) -> str:
        return f"P{index % self.speakers + 1}"


def synthesize_clip(
    synth_class: SynthClass, length: int, rng: np.random.Generator
) -> np.ndarray:
    """Centred fBm scaled to the class RMS, plus tone bursts, clipped to [-1, 1]."""
    x = fractional_brownian_motion(length, synth_class.hurst, rng)
    x = x - x.mean()
    x *= synth_class.energy_scale / np.sqrt(np.mean(x ** 2))
    if synth_class.teo_burst > 0:
        burst_len = max(length // 16, 8)
        spacing = length // BURSTS_PER_CLIP
        n = np.arange(burst_len)
        for i in range(BURSTS_PER_CLIP):
            start = i * spacing + int(rng.integers(0, max(spacing - burst_len, 1)))
            # near a quarter of the sample rate, where the TEO of a tone peaks
            omega = np.pi / 2 * rng.uniform(0.9, 1.1)
            phase = rng.uniform(0, 2 * np.pi)
            stop = min(start + burst_len, length)
            x[start:stop] += synth_class.teo_burst * np.sin(
                omega * n[: stop - start] + phase
            )
    return np.clip(x, -1.0, 1.0)


def generate_synthetic(spec: SynthSpec) -> Tuple[DatasetManifest, List[AudioClip]]:
    """Generate the corpus described by `spec`.

    Clips are assigned to speakers P1..Pn round-robin within each class, and stored
    under relative paths `<speaker>/<emotion>_<index>.wav`.
    """
    classes_seq = np.random.SeedSequence(spec.seed).spawn(len(spec.classes))
    entries, clips = [], []
    for synth_class, class_seq in zip(spec.classes, classes_seq):
        for i, clip_seq in enumerate(class_seq.spawn(spec.per_class_count)):
            rng = np.random.default_rng(clip_seq)
            speaker = spec.speaker_id(i)
            path = f"{speaker}/{synth_class.emotion.value}_{i:03d}.wav"
            samples = synthesize_clip(synth_class, spec.length, rng)
            clips.append(
                AudioClip(
                    samples=samples,
                    sample_rate=spec.sample_rate,
                    speaker=speaker,
                    emotion=synth_class.emotion,
                    source_path=path,
                )
            )
            entries.append(ManifestEntry(path, speaker, synth_class.emotion))
    log.info(
        f"Generated {len(clips)} synthetic clip(s) of {spec.length} samples"
        f" (seed {spec.seed})"
    )
    return DatasetManifest(entries), clips


def write_corpus(
    manifest: DatasetManifest,
    clips: Sequence[AudioClip],
    directory: Union[str, Path],
    manifest_name: str = "manifest.csv",
) -> Path:
    """Write every clip as 16-bit WAV below `directory` plus a `csv` layout manifest.

    Returns:
        Path of the written manifest.
    """
    directory = Path(directory)
    for entry, clip in zip(manifest, clips):
        target = directory / entry.path
        target.parent.mkdir(parents=True, exist_ok=True)
        write_wav(clip, target)
    path = manifest.to_csv(directory / manifest_name)
    log.info(f"Wrote {len(clips)} clip(s) and '{path.name}' to '{directory}'")
    return path


def synth_spec_for(
    per_class_count: Optional[int] = None,
    length: Optional[int] = None,
    seed: Optional[int] = None,
) -> SynthSpec:
    """The default corpus with selected sizes overridden."""
    overrides = dict(per_class_count=per_class_count, length=length, seed=seed)
    return dataclasses.replace(
        SynthSpec(), **{k: v for k, v in overrides.items() if v is not None}
    )
