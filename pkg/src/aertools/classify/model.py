"""The complete emotion classifier: optional screening cascade, then MMC + KNN."""
import dataclasses
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import ModelConfig
from ..emotion import Emotion
from ..errors import FormatError, InsufficientClassesError, ParameterError, ShapeError
from ..pipeline.cascade import (
    Direction,
    ScreeningCascade,
    ScreeningStage,
    apply_cascade,
    fit_cascade,
)
from ..pipeline.vector import (
    LAYOUT_VERSION,
    SCREEN_FEATURES,
    FdBands,
    FeatureVector,
    band_indices,
)
from ..util import atomic_write
from .knn import Exemplars, knn_predict
from .mmc import MmcProjection, mmc_fit, mmc_project

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

Labelled = Tuple[FeatureVector, Emotion]


@dataclasses.dataclass(frozen=True)
class EmotionModel:
    """A fitted classifier for feature vectors of one depth (`levels`).

    Attributes:
        fd_bands: FD entries fed to MMC.
        include_screen: Whether the screening statistics are appended to the MMC input.
    """

    projection: MmcProjection
    exemplars: Exemplars
    k: int
    levels: int
    cascade: Optional[ScreeningCascade] = None
    fd_bands: FdBands = FdBands.all
    include_screen: bool = False
    layout_version: int = LAYOUT_VERSION

    def __post_init__(self):
        if not 1 <= self.k <= len(self.exemplars):
            raise ParameterError(f"k={self.k} must lie within 1..{len(self.exemplars)}")
        if self.exemplars.points.shape[1] != self.projection.output_dim:
            raise ShapeError("Exemplars do not match the projection's output dimension")

    def classifier_input(self, vectors: Sequence[FeatureVector]) -> np.ndarray:
        """Rows of the selected features of `vectors`, in MMC input order."""
        return classifier_input(
            vectors, self.levels, self.fd_bands, self.include_screen
        )


def classifier_input(
    vectors: Sequence[FeatureVector],
    levels: int,
    fd_bands: FdBands,
    include_screen: bool,
) -> np.ndarray:
    columns = band_indices(levels, fd_bands)
    rows = []
    for v in vectors:
        if v.levels != levels or v.layout_version != LAYOUT_VERSION:
            raise ShapeError(
                f"Feature vector (J={v.levels}, v{v.layout_version}) does not match the"
                f" expected layout (J={levels}, v{LAYOUT_VERSION})"
            )
        row = v.fd_features[columns]
        if include_screen:
            row = np.concatenate([row, v.screen_features])
        rows.append(row)
    return np.array(rows, dtype=np.float64)


def fit_model(
    train: Sequence[Labelled], config: ModelConfig = ModelConfig()
) -> EmotionModel:
    """Fit the cascade (if enabled) and the MMC projection on every training vector,
    then store the projected vectors as KNN exemplars.

    Raises:
        InsufficientClassesError: If fewer than two emotions are present.
        ParameterError: If `mmc_dim` exceeds the input dimension or `knn_k` the
            training-set size.
    """
    train = list(train)
    labels = [Emotion(label) for _, label in train]
    if len(set(labels)) < 2:
        raise InsufficientClassesError(
            f"Training needs at least 2 emotions, got {len(set(labels))}"
        )
    levels = {v.levels for v, _ in train}
    if len(levels) != 1:
        raise ShapeError(f"Training vectors have mixed depths {sorted(levels)}")
    levels = levels.pop()
    if config.knn_k > len(train):
        raise ParameterError(
            f"knn_k={config.knn_k} exceeds the {len(train)} training utterance(s)"
        )
    cascade = fit_cascade(train, config.cascade_order) if config.cascade else None
    x = classifier_input(
        [v for v, _ in train], levels, config.fd_bands, config.include_screen
    )
    projection = mmc_fit(x, labels, config.mmc_dim)
    exemplars = Exemplars(points=mmc_project(projection, x), labels=tuple(labels))
    log.info(
        f"Fitted model on {len(train)} utterance(s):"
        f" MMC {x.shape[1]} -> {config.mmc_dim}, k={config.knn_k},"
        f" cascade {'on' if cascade else 'off'}"
    )
    return EmotionModel(
        projection=projection,
        exemplars=exemplars,
        k=config.knn_k,
        levels=levels,
        cascade=cascade,
        fd_bands=FdBands(config.fd_bands),
        include_screen=config.include_screen,
    )


def predict(model: EmotionModel, v: FeatureVector) -> Emotion:
    """Cascade first when present; otherwise, or on pass-through, MMC + KNN."""
    x = model.classifier_input([v])
    if model.cascade is not None:
        screened = apply_cascade(model.cascade, v)
        if screened is not None:
            return screened
    return knn_predict(model.exemplars, mmc_project(model.projection, x[0]), model.k)


def predict_many(
    model: EmotionModel, vectors: Sequence[FeatureVector]
) -> List[Emotion]:
    return [predict(model, v) for v in vectors]


def _model_record(model: EmotionModel) -> Dict[str, Any]:
    cascade = None
    if model.cascade is not None:
        cascade = [
            {
                "target": s.target.value,
                "feature": s.feature_name,
                "direction": s.direction.value,
                "threshold": s.threshold,
                "margin": s.margin,
            }
            for s in model.cascade.stages
        ]
    p = model.projection
    return {
        "format_version": FORMAT_VERSION,
        "layout_version": model.layout_version,
        "levels": model.levels,
        "k": model.k,
        "fd_bands": model.fd_bands.value,
        "include_screen": model.include_screen,
        "projection": {
            # basis rows are directions; columns follow the MMC input order
            "basis": p.basis.tolist(),
            "eigenvalues": p.eigenvalues.tolist(),
            "feature_mean": p.feature_mean.tolist(),
            "feature_scale": p.feature_scale.tolist(),
        },
        "exemplars": {
            "points": model.exemplars.points.tolist(),
            "labels": [label.value for label in model.exemplars.labels],
        },
        "cascade": cascade,
    }


def save_model(model: EmotionModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    with atomic_write(path) as f:
        json.dump(_model_record(model), f, indent=1)
        f.write("\n")
    log.info(f"Saved model to '{path}'")
    return path


def load_model(path: Union[str, Path]) -> EmotionModel:
    """Read a model written by `save_model`.

    Raises:
        FormatError: If the file is not a model of a supported format version.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            record = json.load(f)
        if record.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"'{path}': unsupported model format {record.get('format_version')}"
            )
        cascade = None
        if record["cascade"] is not None:
            cascade = ScreeningCascade(
                stages=tuple(
                    ScreeningStage(
                        target=Emotion(s["target"]),
                        feature_index=SCREEN_FEATURES.index(s["feature"]),
                        direction=Direction(s["direction"]),
                        threshold=float(s["threshold"]),
                        margin=float(s["margin"]),
                    )
                    for s in record["cascade"]
                ),
                layout_version=record["layout_version"],
            )
        p = record["projection"]
        return EmotionModel(
            projection=MmcProjection(
                basis=p["basis"],
                eigenvalues=p["eigenvalues"],
                feature_mean=p["feature_mean"],
                feature_scale=p["feature_scale"],
            ),
            exemplars=Exemplars(
                points=record["exemplars"]["points"],
                labels=tuple(record["exemplars"]["labels"]),
            ),
            k=record["k"],
            levels=record["levels"],
            cascade=cascade,
            fd_bands=FdBands(record["fd_bands"]),
            include_screen=bool(record["include_screen"]),
            layout_version=record["layout_version"],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"'{path}': malformed model file ({e})") from e
