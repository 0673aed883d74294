"""Sequential one-dimensional screening stages over utterance energy and TEO statistics.

Each stage compares one screening feature against a threshold learned by the midpoint
rule; the first stage that fires decides the emotion, otherwise the utterance passes
through to the residual classifier.
"""
import dataclasses
import enum
import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..emotion import Emotion
from ..errors import InsufficientDataError, ParameterError, ShapeError
from .vector import LAYOUT_VERSION, SCREEN_FEATURES, FeatureVector

log = logging.getLogger(__name__)

DEFAULT_ORDER = "angry:teo_mean:greater,sad:le_mean:less,disgust:le_mean:less"
MIN_STAGE_COUNT = 2


class Direction(str, enum.Enum):
    greater = "greater"
    less = "less"

    def __str__(self):
        return self.value


StageSpec = Tuple[Emotion, int, Direction]


def parse_stage_order(text: str) -> List[StageSpec]:
    """Parse `emotion:feature:direction` items separated by commas.

    `feature` is a screening feature name (see `SCREEN_FEATURES`) or its index.

    Raises:
        ParameterError: On malformed items, unknown names or repeated target emotions.
    """
    stages = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = [p.strip() for p in item.split(":")]
        if len(parts) != 3:
            raise ParameterError(
                f"Cascade stage '{item}' is not of the form emotion:feature:direction"
            )
        emotion = Emotion.parse(parts[0])
        if emotion is None:
            raise ParameterError(f"Stage '{item}': unknown emotion '{parts[0]}'")
        if parts[1].isdigit():
            index = int(parts[1])
        elif parts[1] in SCREEN_FEATURES:
            index = SCREEN_FEATURES.index(parts[1])
        else:
            raise ParameterError(f"Stage '{item}': unknown feature '{parts[1]}'")
        if not 0 <= index < len(SCREEN_FEATURES):
            raise ParameterError(f"Cascade stage '{item}': feature index out of range")
        try:
            direction = Direction(parts[2])
        except ValueError:
            raise ParameterError(
                f"Cascade stage '{item}': direction must be 'greater' or 'less'"
            ) from None
        stages.append((emotion, index, direction))
    targets = [s[0] for s in stages]
    if len(set(targets)) != len(targets):
        raise ParameterError(f"Cascade stage targets must be distinct: '{text}'")
    return stages


def format_stage_order(order: Sequence[StageSpec]) -> str:
    return ",".join(f"{e.value}:{SCREEN_FEATURES[i]}:{d.value}" for e, i, d in order)


@dataclasses.dataclass(frozen=True)
class ScreeningStage:
    target: Emotion
    feature_index: int
    direction: Direction
    threshold: float
    margin: float

    def __post_init__(self):
        if not 0 <= self.feature_index < len(SCREEN_FEATURES):
            raise ShapeError(f"Screening feature index {self.feature_index} is invalid")
        if not np.isfinite(self.threshold) or not self.margin >= 0:
            raise ParameterError("Stage threshold must be finite and margin >= 0")

    @property
    def feature_name(self) -> str:
        return SCREEN_FEATURES[self.feature_index]

    def fires(self, value: float) -> bool:
        """Strictly beyond the threshold, and only for stages with a positive margin."""
        if self.margin <= 0:
            return False
        if self.direction is Direction.greater:
            return value > self.threshold
        return value < self.threshold


@dataclasses.dataclass(frozen=True)
class ScreeningCascade:
    stages: Tuple[ScreeningStage, ...]
    layout_version: int = LAYOUT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        targets = [s.target for s in self.stages]
        if len(set(targets)) != len(targets):
            raise ParameterError("Screening stage targets must be distinct emotions")

    def __len__(self) -> int:
        return len(self.stages)

    def __iter__(self):
        return iter(self.stages)


def fit_cascade(
    features: Sequence[Tuple[FeatureVector, Emotion]],
    order: Union[str, Sequence[StageSpec]] = DEFAULT_ORDER,
) -> ScreeningCascade:
    """Fit each stage on the utterances that survived the stages before it.

    Thresholds lie midway between the target's and the complement's mean feature value;
    the margin is half the gap. A stage whose target mean lies on the wrong side for its
    direction is kept with margin 0 so that it never fires.

    Raises:
        InsufficientDataError: If a stage sees fewer than two target or complement
            utterances.
    """
    if isinstance(order, str):
        order = parse_stage_order(order)
    surviving = list(features)
    stages = []
    for target, index, direction in order:
        values = np.array([v.screen_features[index] for v, _ in surviving])
        is_target = np.array([label is target for _, label in surviving], dtype=bool)
        n_target, n_rest = int(is_target.sum()), int((~is_target).sum())
        if n_target < MIN_STAGE_COUNT or n_rest < MIN_STAGE_COUNT:
            raise InsufficientDataError(
                f"Screening stage '{target}' needs >= {MIN_STAGE_COUNT} target and"
                f" complement utterances, got {n_target} and {n_rest}"
            )
        target_mean = float(np.mean(values[is_target]))
        rest_mean = float(np.mean(values[~is_target]))
        threshold = (target_mean + rest_mean) / 2
        margin = abs(target_mean - rest_mean) / 2
        wrong_side = (
            target_mean < rest_mean
            if direction is Direction.greater
            else target_mean > rest_mean
        )
        if wrong_side:
            log.warning(
                f"Screening stage '{target}' ({SCREEN_FEATURES[index]} {direction}):"
                f" target mean {target_mean:.4g} is on the wrong side of the complement"
                f" mean {rest_mean:.4g}; disabling the stage"
            )
            margin = 0.0
        stage = ScreeningStage(target, index, direction, threshold, margin)
        stages.append(stage)
        captured = np.array([stage.fires(x) for x in values], dtype=bool)
        log.debug(
            f"Stage '{target}': threshold {threshold:.4g}, margin {margin:.4g},"
            f" captures {int(captured.sum())} of {len(surviving)}"
        )
        surviving = [s for s, c in zip(surviving, captured) if not c]
    return ScreeningCascade(stages=tuple(stages))


def apply_cascade(cascade: ScreeningCascade, v: FeatureVector) -> Optional[Emotion]:
    """First firing stage's target, or None to pass the vector through."""
    if v.layout_version != cascade.layout_version:
        raise ShapeError(
            f"Feature layout v{v.layout_version} does not match the cascade's"
            f" v{cascade.layout_version}"
        )
    for stage in cascade.stages:
        if stage.fires(v.screen_features[stage.feature_index]):
            return stage.target
    return None
