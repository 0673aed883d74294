import dataclasses
import logging
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from ..emotion import Emotion
from ..errors import ModelError, ParameterError, ShapeError

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Exemplars:
    """Reduced training vectors (one per row) and their labels."""

    points: np.ndarray
    labels: Tuple[Emotion, ...]

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64)
        labels = tuple(Emotion(label) for label in self.labels)
        if points.ndim != 2 or points.shape[0] != len(labels):
            raise ShapeError(f"{len(labels)} labels for exemplar array {points.shape}")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)


def knn_predict(exemplars: Exemplars, query: np.ndarray, k: int) -> Emotion:
    """Majority vote among the `k` Euclidean-nearest exemplars.

    Neighbours are ranked by (distance, label). Vote ties go to the label with the
    smaller summed neighbour distance, then to the alphabetically first label.

    Raises:
        ModelError: If there are no exemplars.
        ParameterError: If `k` is not within 1..len(exemplars).
        ShapeError: If the query dimension does not match the exemplars.
    """
    if len(exemplars) == 0:
        raise ModelError("Cannot classify without exemplars")
    if not 1 <= k <= len(exemplars):
        raise ParameterError(f"k={k} must lie within 1..{len(exemplars)}")
    query = np.asarray(query, dtype=np.float64).reshape(1, -1)
    if query.shape[1] != exemplars.points.shape[1]:
        raise ShapeError(
            f"Query of dimension {query.shape[1]} does not match exemplars of"
            f" dimension {exemplars.points.shape[1]}"
        )
    distances = cdist(query, exemplars.points)[0]
    names = np.array([label.value for label in exemplars.labels])
    nearest = np.lexsort((names, distances))[:k]
    votes = {}
    for i in nearest:
        count, total = votes.get(names[i], (0, 0.0))
        votes[names[i]] = (count + 1, total + distances[i])
    winner = min(votes, key=lambda name: (-votes[name][0], votes[name][1], name))
    return Emotion(winner)
