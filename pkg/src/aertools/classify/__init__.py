from .knn import Exemplars, knn_predict
from .mmc import MmcProjection, mmc_fit, mmc_project, scatter_matrices
from .model import (
    EmotionModel,
    fit_model,
    load_model,
    predict,
    predict_many,
    save_model,
)
