"""Run configuration: typed sections, a `section.key = value` file format, and flat
snapshots for reports and cache keys.

Precedence is CLI flag over config file over built-in default.
"""
import dataclasses
import enum
import logging
import typing
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from .errors import ParameterError
from .experiment.protocol import SplitKind
from .features.fractal import FdMethod
from .features.wavelet import BoundaryMode, WaveletFamily
from .pipeline.cascade import DEFAULT_ORDER, parse_stage_order
from .pipeline.vector import FdBands

log = logging.getLogger(__name__)


def _check(condition: bool, message: str):
    if not condition:
        raise ParameterError(message)


@dataclasses.dataclass(frozen=True)
class FrameConfig:
    frame_len: int = 512
    hop: int = 256
    f_min: float = 60.0
    f_max: float = 400.0
    voicing_threshold: float = 2.5
    eps: float = 1e-12

    def __post_init__(self):
        _check(self.frame_len >= 3, f"frame.frame_len must be >= 3: {self.frame_len}")
        _check(self.hop >= 1, f"frame.hop must be >= 1, got {self.hop}")
        _check(0 < self.f_min < self.f_max, "frame.f_min must lie in (0, frame.f_max)")
        _check(self.eps > 0, "frame.eps must be positive")


@dataclasses.dataclass(frozen=True)
class WaveletConfig:
    family: WaveletFamily = WaveletFamily.db4
    levels: int = 5
    mode: BoundaryMode = BoundaryMode.symmetric

    def __post_init__(self):
        _check(self.levels >= 1, f"wavelet.levels must be >= 1, got {self.levels}")


@dataclasses.dataclass(frozen=True)
class FdConfig:
    method: FdMethod = FdMethod.higuchi
    k_max: int = 8
    k_max_raw: int = 16

    def __post_init__(self):
        _check(self.k_max >= 2, f"fd.k_max must be >= 2, got {self.k_max}")
        _check(self.k_max_raw >= 2, f"fd.k_max_raw must be >= 2, got {self.k_max_raw}")


@dataclasses.dataclass(frozen=True)
class ModelConfig:
    mmc_dim: int = 5
    knn_k: int = 3
    cascade: bool = True
    cascade_order: str = DEFAULT_ORDER
    fd_bands: FdBands = FdBands.all
    include_screen: bool = False

    def __post_init__(self):
        _check(self.mmc_dim >= 1, f"model.mmc_dim must be >= 1, got {self.mmc_dim}")
        _check(self.knn_k >= 1, f"model.knn_k must be >= 1, got {self.knn_k}")
        parse_stage_order(self.cascade_order)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    frame: FrameConfig = FrameConfig()
    wavelet: WaveletConfig = WaveletConfig()
    fd: FdConfig = FdConfig()
    model: ModelConfig = ModelConfig()
    protocol: SplitKind = SplitKind.one_vs_three
    layout: str = "csv"
    seed: int = 0
    workers: int = 1
    cache: Optional[str] = None

    _SECTIONS = ("frame", "wavelet", "fd", "model")

    def __post_init__(self):
        _check(self.workers >= 1, f"experiment.workers must be >= 1: {self.workers}")

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        """Return a copy with `section.key` values replaced; None values are ignored.

        Keys of the top-level experiment settings may be given bare or as
        `experiment.key`. String values are converted to the field's type.
        """
        sections: Dict[str, Dict[str, Any]] = {s: {} for s in self._SECTIONS}
        top: Dict[str, Any] = {}
        for dotted, value in overrides.items():
            if value is None:
                continue
            section, _, key = dotted.rpartition(".")
            if section in ("", "experiment"):
                top[key] = _convert(type(self), key, value)
            elif section in sections:
                section_type = type(getattr(self, section))
                sections[section][key] = _convert(section_type, key, value)
            else:
                raise ParameterError(f"Unknown configuration section '{section}'")
        for section, values in sections.items():
            if values:
                top[section] = dataclasses.replace(getattr(self, section), **values)
        return dataclasses.replace(self, **top)

    def snapshot(self) -> Dict[str, str]:
        """Flat, ordered `section.key -> text` record of every setting."""
        record = {}
        for section in self._SECTIONS:
            for field in dataclasses.fields(getattr(self, section)):
                record[f"{section}.{field.name}"] = _format(
                    getattr(getattr(self, section), field.name)
                )
        for field in dataclasses.fields(self):
            if field.name not in self._SECTIONS:
                record[f"experiment.{field.name}"] = _format(getattr(self, field.name))
        return record

    def extraction_snapshot(self) -> Dict[str, str]:
        """The subset of `snapshot` that determines feature values."""
        return {
            k: v
            for k, v in self.snapshot().items()
            if k.split(".")[0] in ("frame", "wavelet", "fd")
        }


def _format(value: Any) -> str:
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "on" if value else "off"
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _convert(owner: type, key: str, value: Any) -> Any:
    hints = typing.get_type_hints(owner)
    names = {f.name for f in dataclasses.fields(owner)}
    if key not in names or key.startswith("_"):
        raise ParameterError(f"Unknown configuration key '{key}' for {owner.__name__}")
    target = hints[key]
    if typing.get_origin(target) is Union:  # Optional[...]
        if value in ("", None):
            return None
        target = next(t for t in typing.get_args(target) if t is not type(None))
    if isinstance(value, target) and not (target is int and isinstance(value, bool)):
        return value
    text = str(value).strip()
    try:
        if target is bool:
            if text.lower() in _TRUE:
                return True
            if text.lower() in _FALSE:
                return False
            raise ValueError(f"not a boolean: '{text}'")
        if isinstance(target, type) and issubclass(target, enum.Enum):
            return target(text)
        return target(text)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"Invalid value '{value}' for '{key}': {e}") from None


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read `section.key = value` lines over the defaults.

    Raises:
        ParameterError: On malformed lines, unknown keys or unparseable values.
    """
    path = Path(path)
    overrides = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParameterError(f"Cannot read configuration file '{path}': {e}") from e
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"'{path.name}' line {lineno}: expected 'key = value'")
        overrides[key.strip()] = value.strip()
    config = ExperimentConfig().with_overrides(overrides)
    log.debug(f"Loaded {len(overrides)} setting(s) from '{path}'")
    return config
