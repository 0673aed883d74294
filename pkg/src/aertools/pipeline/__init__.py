from .cache import FeatureCache
from .cascade import (
    DEFAULT_ORDER,
    Direction,
    ScreeningCascade,
    ScreeningStage,
    apply_cascade,
    fit_cascade,
    parse_stage_order,
)
from .vector import (
    SCREEN_FEATURES,
    FdBands,
    FeatureVector,
    extract_features,
    feature_names,
)
