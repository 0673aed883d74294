"""Multilevel orthonormal discrete wavelet analysis and synthesis.

Coefficient lengths are part of the feature contract: in `symmetric` and `zero` modes a
level maps N samples to floor((N + L_f - 1) / 2) coefficients per band, in `periodic`
mode to ceil(N / 2).
"""
import dataclasses
import enum
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pywt

from ..errors import FormatError, ParameterError, ShapeError, TooShortError
from ..util import atomic_write

log = logging.getLogger(__name__)


class WaveletFamily(str, enum.Enum):
    haar = "haar"
    db2 = "db2"
    db4 = "db4"
    db8 = "db8"

    def __str__(self):
        return self.value


class BoundaryMode(str, enum.Enum):
    symmetric = "symmetric"
    periodic = "periodic"
    zero = "zero"

    def __str__(self):
        return self.value

    @property
    def pywt_mode(self) -> str:
        return "periodization" if self is BoundaryMode.periodic else self.value


@dataclasses.dataclass(frozen=True)
class WaveletFilterPair:
    """Orthonormal synthesis filters; highpass[i] = (-1)^i * lowpass[L - 1 - i]."""

    lowpass: np.ndarray
    highpass: np.ndarray
    family_name: str
    wavelet: pywt.Wavelet = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bank = (
            self.lowpass[::-1].tolist(),
            self.highpass[::-1].tolist(),
            self.lowpass.tolist(),
            self.highpass.tolist(),
        )
        object.__setattr__(
            self, "wavelet", pywt.Wavelet(self.family_name, filter_bank=bank)
        )

    def __len__(self) -> int:
        return self.lowpass.size


def filter_coeffs(family: Union[WaveletFamily, str]) -> WaveletFilterPair:
    try:
        family = WaveletFamily(family)
    except ValueError:
        raise ParameterError(
            f"Unknown wavelet family '{family}'; expected one of"
            f" {[f.value for f in WaveletFamily]}"
        ) from None
    builtin = pywt.Wavelet(family.value)
    lowpass = np.asarray(builtin.rec_lo, dtype=np.float64)
    highpass = np.asarray(builtin.rec_hi, dtype=np.float64)
    lowpass.setflags(write=False)
    highpass.setflags(write=False)
    return WaveletFilterPair(
        lowpass=lowpass, highpass=highpass, family_name=family.value
    )


def coeff_length(n: int, filter_length: int, mode: BoundaryMode) -> int:
    return pywt.dwt_coeff_len(n, filter_length, BoundaryMode(mode).pywt_mode)


def dwt_single(
    signal: Sequence[float], filter: WaveletFilterPair, boundary_mode: BoundaryMode
) -> Tuple[np.ndarray, np.ndarray]:
    """One analysis level: (approx, detail) of equal, mode-determined length."""
    # the pywt kernels reject read-only buffers such as `AudioClip.samples`
    signal = np.array(signal, dtype=np.float64)
    if signal.size < len(filter):
        raise TooShortError(
            f"Signal of {signal.size} samples is shorter than the"
            f" {filter.family_name} filter ({len(filter)})"
        )
    mode = BoundaryMode(boundary_mode)
    approx, detail = pywt.dwt(signal, filter.wavelet, mode=mode.pywt_mode)
    return approx, detail


def idwt_single(
    approx: Sequence[float],
    detail: Sequence[float],
    filter: WaveletFilterPair,
    boundary_mode: BoundaryMode,
    target_length: int,
) -> np.ndarray:
    """Invert `dwt_single` for a signal that had `target_length` samples."""
    approx = np.array(approx, dtype=np.float64)
    detail = np.array(detail, dtype=np.float64)
    mode = BoundaryMode(boundary_mode)
    expected = coeff_length(target_length, len(filter), mode)
    if approx.shape != detail.shape or approx.size != expected:
        raise ShapeError(
            f"Coefficient lengths {approx.size}/{detail.size} are inconsistent with a"
            f" {target_length}-sample signal (expected {expected})"
        )
    signal = pywt.idwt(approx, detail, filter.wavelet, mode=mode.pywt_mode)
    return signal[:target_length]


@dataclasses.dataclass(frozen=True)
class WaveletDecomposition:
    """Result of a J-level analysis.

    Attributes:
        levels: Number of levels J actually computed.
        details: d_1 .. d_J, finest first.
        approximations: a_1 .. a_J; only a_J is needed for synthesis.
        boundary_mode: Signal extension used at every level.
        filter: Filter pair used at every level.
        original_length: Length of the analysed signal.
    """

    levels: int
    details: Tuple[np.ndarray, ...]
    approximations: Tuple[np.ndarray, ...]
    boundary_mode: BoundaryMode
    filter: WaveletFilterPair
    original_length: int

    @property
    def approx(self) -> np.ndarray:
        return self.approximations[-1]

    def input_lengths(self) -> List[int]:
        """Lengths of the signals analysed at levels 1..J."""
        lengths = [self.original_length]
        for a in self.approximations[:-1]:
            lengths.append(a.size)
        return lengths

    def reconstruct(self) -> np.ndarray:
        return waverec(self)


def max_levels(
    n: int, filter_length: int, mode: BoundaryMode, min_length: Optional[int] = None
) -> int:
    """Deepest J whose every analysed signal holds >= `filter_length` samples and whose
    final approximation holds >= `min_length` samples."""
    levels = 0
    while n >= filter_length:
        n = coeff_length(n, filter_length, mode)
        if min_length is not None and n < min_length:
            break
        levels += 1
    return levels


def wavedec(
    signal: Sequence[float],
    filter: WaveletFilterPair,
    boundary_mode: BoundaryMode,
    levels: int,
    min_length: Optional[int] = None,
) -> WaveletDecomposition:
    """Iterate `dwt_single` over successive approximations.

    If the signal cannot support `levels` levels (see `max_levels`) the depth is clamped
    with a warning rather than failing.

    Raises:
        ParameterError: If `levels` < 1.
        TooShortError: If not even one level fits.
    """
    if levels < 1:
        raise ParameterError(f"Number of levels must be >= 1, got {levels}")
    signal = np.asarray(signal, dtype=np.float64)
    mode = BoundaryMode(boundary_mode)
    feasible = max_levels(signal.size, len(filter), mode, min_length)
    if feasible == 0:
        raise TooShortError(
            f"Signal of {signal.size} samples is too short for one {filter.family_name}"
            " level"
        )
    if feasible < levels:
        log.warning(
            f"Signal of {signal.size} samples supports {feasible} of {levels} levels;"
            f" clamping to J={feasible}"
        )
        levels = feasible
    details, approximations = [], []
    current = signal
    for _ in range(levels):
        current, detail = dwt_single(current, filter, mode)
        approximations.append(current)
        details.append(detail)
    return WaveletDecomposition(
        levels=levels,
        details=tuple(details),
        approximations=tuple(approximations),
        boundary_mode=mode,
        filter=filter,
        original_length=signal.size,
    )


def waverec(decomposition: WaveletDecomposition) -> np.ndarray:
    """Synthesise the original signal from a_J and d_J .. d_1."""
    lengths = decomposition.input_lengths()
    signal = decomposition.approx
    for level in range(decomposition.levels, 0, -1):
        signal = idwt_single(
            signal,
            decomposition.details[level - 1],
            decomposition.filter,
            decomposition.boundary_mode,
            lengths[level - 1],
        )
    return signal


def save_decomposition(
    decomposition: WaveletDecomposition, path: Union[str, Path]
) -> Path:
    """Write a decomposition as text: a `family,mode,levels,original_length` header, the
    band lengths of a_J, d_J .. d_1, then one coefficient per line in that order."""
    path = Path(path)
    bands = [decomposition.approx, *reversed(decomposition.details)]
    with atomic_write(path) as f:
        f.write(
            f"{decomposition.filter.family_name},{decomposition.boundary_mode.value},"
            f"{decomposition.levels},{decomposition.original_length}\n"
        )
        f.write(",".join(str(b.size) for b in bands) + "\n")
        for band in bands:
            f.writelines(f"{v!r}\n" for v in band.tolist())
    return path


def load_decomposition(path: Union[str, Path]) -> WaveletDecomposition:
    """Read a file written by `save_decomposition`.

    Intermediate approximations are not stored; they are recomputed by partial synthesis
    so that the returned object is complete.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    try:
        family, mode, levels, original_length = lines[0].split(",")
        lengths = [int(n) for n in lines[1].split(",")]
        values = np.array([float(v) for v in lines[2:]], dtype=np.float64)
        levels, original_length = int(levels), int(original_length)
        mode = BoundaryMode(mode)
    except (IndexError, ValueError) as e:
        raise FormatError(f"'{path}': malformed decomposition file ({e})") from e
    if len(lengths) != levels + 1 or sum(lengths) != values.size:
        raise FormatError(f"'{path}': band lengths do not match the stored values")
    bands = np.split(values, np.cumsum(lengths)[:-1])
    filter = filter_coeffs(family)
    details = tuple(reversed(bands[1:]))
    # rebuild a_{J-1} .. a_1 from the coarsest level down
    input_lengths = [original_length]
    n = original_length
    for _ in range(levels - 1):
        n = coeff_length(n, len(filter), mode)
        input_lengths.append(n)
    approximations = [bands[0]]
    for level in range(levels, 1, -1):
        approximations.insert(
            0,
            idwt_single(
                approximations[0],
                details[level - 1],
                filter,
                mode,
                input_lengths[level - 1],
            ),
        )
    return WaveletDecomposition(
        levels=levels,
        details=details,
        approximations=tuple(approximations),
        boundary_mode=mode,
        filter=filter,
        original_length=original_length,
    )
