"""Katz and Higuchi fractal-dimension estimators for one-dimensional series."""
import dataclasses
import enum
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateSignalError, ParameterError, TooShortError

log = logging.getLogger(__name__)

# series whose peak-to-peak range is at or below this have no measurable curve length
FLAT_TOLERANCE = 1e-12


class FdMethod(str, enum.Enum):
    higuchi = "higuchi"
    katz = "katz"

    def __str__(self):
        return self.value


@dataclasses.dataclass(frozen=True)
class HiguchiConfig:
    """Delays k = 1..k_max, or the inclusive `fit_range` (k_lo, k_hi) if given."""

    k_max: int = 8
    fit_range: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.k_max < 2:
            raise ParameterError(f"k_max must be >= 2, got {self.k_max}")
        if self.fit_range is not None:
            lo, hi = self.fit_range
            if not 1 <= lo < hi <= self.k_max:
                raise ParameterError(
                    f"fit_range {self.fit_range} must satisfy 1 <= lo < hi <= k_max"
                )

    def delays(self, k_max: Optional[int] = None) -> np.ndarray:
        k_max = self.k_max if k_max is None else k_max
        lo, hi = (1, k_max) if self.fit_range is None else self.fit_range
        return np.arange(lo, min(hi, k_max) + 1)


@dataclasses.dataclass(frozen=True)
class FdEstimate:
    dimension: float
    fit_residual: float
    points_used: int


def katz_fd(series: Sequence[float]) -> float:
    """Katz dimension of the planar curve (i, x_i), with n = N - 1 steps.

    L is the summed length of successive steps, d the largest distance from the first
    point; the result is log(n) / (log(n) + log(d / L)).
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size < 3:
        raise TooShortError(f"Katz FD needs at least 3 samples, got {x.size}")
    n = x.size - 1
    length = float(np.sum(np.hypot(1.0, np.diff(x))))
    extent = float(np.max(np.hypot(np.arange(1, x.size), x[1:] - x[0])))
    denominator = math.log(n) + math.log(extent / length)
    if denominator <= 0:
        raise DegenerateSignalError(
            f"Katz FD undefined: path length {length} dwarfs extent {extent}"
        )
    return math.log(n) / denominator


def higuchi_lengths(series: Sequence[float], k: int) -> float:
    """Mean normalised curve length <L(k)> over the k offset sub-series.

    For offset m = 1..k the sub-series x(m), x(m+k), ... has floor((N-m)/k) increments,
    and L_m(k) = sum|increments| * (N-1) / (floor((N-m)/k) * k^2).

    Raises:
        ParameterError: If k < 1, k >= N, or some offset has no increments (N < 2k).
    """
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    if not 1 <= k < n:
        raise ParameterError(f"Delay k={k} must satisfy 1 <= k < N={n}")
    if (n - k) // k < 1:
        raise ParameterError(
            f"Delay k={k} leaves offset m={k} without increments (N={n})"
        )
    total = 0.0
    for m in range(k):
        sub = x[m::k]
        increments = sub.size - 1
        total += np.sum(np.abs(np.diff(sub))) * (n - 1) / (increments * k * k)
    return total / k


def higuchi_fd(
    series: Sequence[float], config: HiguchiConfig = HiguchiConfig()
) -> FdEstimate:
    """Higuchi dimension: minus the OLS slope of log <L(k)> against log k.

    Series too short for the configured k_max (N <= 2 k_max) are fitted over
    k <= floor(N / 2) instead, with a warning.

    Raises:
        DegenerateSignalError: If the series is flat or any <L(k)> is zero.
        TooShortError: If fewer than two delays can be fitted.
    """
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    k_max = config.k_max
    if n <= 2 * k_max:
        k_max = n // 2
        if k_max < 2:
            raise TooShortError(f"Higuchi FD needs at least 4 samples, got {n}")
        log.warning(
            f"Series of {n} samples is short for k_max={config.k_max}; using {k_max}"
        )
    ks = config.delays(k_max)
    if ks.size < 2:
        raise TooShortError(
            f"Series of {n} samples leaves fewer than two delays to fit"
        )
    if np.ptp(x) <= FLAT_TOLERANCE:
        raise DegenerateSignalError("Higuchi FD undefined for a flat series")
    lengths = np.array([higuchi_lengths(x, int(k)) for k in ks])
    if np.any(lengths <= 0):
        raise DegenerateSignalError("Higuchi FD undefined: zero curve length")
    log_k, log_l = np.log(ks), np.log(lengths)
    slope, intercept = np.polyfit(log_k, log_l, 1)
    residuals = log_l - (slope * log_k + intercept)
    return FdEstimate(
        dimension=float(-slope),
        fit_residual=float(np.sqrt(np.mean(residuals ** 2))),
        points_used=int(ks.size),
    )


def estimate_fd(series: Sequence[float], method: FdMethod, k_max: int) -> float:
    if FdMethod(method) is FdMethod.katz:
        return katz_fd(series)
    return higuchi_fd(series, HiguchiConfig(k_max=k_max)).dimension
