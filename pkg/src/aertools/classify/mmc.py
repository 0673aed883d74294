"""Maximum margin criterion (MMC) linear dimensionality reduction.

Features are z-scored per dimension, then projected onto the leading eigenvectors of
S_b - S_w, the difference between the between-class and the within-class scatter.
"""
import dataclasses
import logging
from typing import Hashable, List, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..errors import InsufficientClassesError, ParameterError, ShapeError

log = logging.getLogger(__name__)

# standard deviations at or below this count as zero variance
VARIANCE_FLOOR = 1e-12


def _classes(labels: Sequence[Hashable]) -> List[Hashable]:
    return sorted(set(labels), key=str)


def scatter_matrices(
    features: np.ndarray, labels: Sequence[Hashable]
) -> Tuple[np.ndarray, np.ndarray]:
    """Prior-weighted between-class and within-class scatter.

    S_b = sum_c p_c (m_c - m)(m_c - m)^T and S_w = sum_c p_c S_c, where S_c is the
    (biased) covariance of class c and p_c its share of the vectors, so that
    S_b + S_w is the total scatter.

    Raises:
        InsufficientClassesError: If fewer than two classes are present.
        ShapeError: If `labels` does not have one entry per row of `features`.
    """
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = list(labels)
    if len(labels) != x.shape[0]:
        raise ShapeError(f"{len(labels)} labels for {x.shape[0]} feature vectors")
    classes = _classes(labels)
    if len(classes) < 2:
        raise InsufficientClassesError(
            f"Scatter matrices need at least 2 classes, got {len(classes)}"
        )
    labels = np.array([str(label) for label in labels])
    n, dim = x.shape
    mean = x.mean(axis=0)
    s_b = np.zeros((dim, dim))
    s_w = np.zeros((dim, dim))
    for c in classes:
        members = x[labels == str(c)]
        prior = members.shape[0] / n
        offset = members.mean(axis=0) - mean
        s_b += prior * np.outer(offset, offset)
        centred = members - members.mean(axis=0)
        s_w += prior * (centred.T @ centred) / members.shape[0]
    return (s_b + s_b.T) / 2, (s_w + s_w.T) / 2


@dataclasses.dataclass(frozen=True)
class MmcProjection:
    """A fitted reduction.

    Attributes:
        basis: (d, D) array whose rows are orthonormal directions in standardized
            feature space, ordered by descending eigenvalue.
        eigenvalues: The d leading eigenvalues of S_b - S_w, descending.
        feature_mean: Per-dimension means subtracted before projection.
        feature_scale: Per-dimension standard deviations (1 for constant dimensions).
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    feature_mean: np.ndarray
    feature_scale: np.ndarray

    def __post_init__(self):
        for name in ("basis", "eigenvalues", "feature_mean", "feature_scale"):
            array = np.array(getattr(self, name), dtype=np.float64)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if (
            self.basis.ndim != 2
            or self.eigenvalues.shape != (self.basis.shape[0],)
            or self.feature_mean.shape != (self.basis.shape[1],)
            or self.feature_scale.shape != (self.basis.shape[1],)
        ):
            raise ShapeError("Inconsistent MMC projection dimensions")

    @property
    def input_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def output_dim(self) -> int:
        return self.basis.shape[0]

    def standardize(self, features: np.ndarray) -> np.ndarray:
        return (features - self.feature_mean) / self.feature_scale


def standardization(features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Column means and population standard deviations, constant columns scaled by 1."""
    mean = features.mean(axis=0)
    scale = features.std(axis=0)
    flat = scale <= VARIANCE_FLOOR
    if np.any(flat):
        log.warning(
            f"Feature dimension(s) {np.flatnonzero(flat).tolist()} have zero variance;"
            " using a scale of 1"
        )
        scale = np.where(flat, 1.0, scale)
    return mean, scale


def mmc_fit(features: np.ndarray, labels: Sequence[Hashable], d: int) -> MmcProjection:
    """Fit a `d`-dimensional MMC projection.

    Eigenvectors come from `scipy.linalg.eigh` and are sign-normalised so that each
    one's largest-magnitude component is positive, which makes fitted models
    reproducible.

    Raises:
        ParameterError: If `d` is not within 1..D.
        InsufficientClassesError: If fewer than two classes are present.
    """
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    dim = x.shape[1]
    if not 1 <= d <= dim:
        raise ParameterError(f"MMC dimension d={d} must lie within 1..{dim}")
    mean, scale = standardization(x)
    s_b, s_w = scatter_matrices((x - mean) / scale, labels)
    eigenvalues, eigenvectors = linalg.eigh(s_b - s_w)
    order = np.argsort(eigenvalues, kind="stable")[::-1][:d]
    basis = eigenvectors[:, order].T
    signs = np.sign(basis[np.arange(d), np.argmax(np.abs(basis), axis=1)])
    basis = basis * np.where(signs == 0, 1.0, signs)[:, np.newaxis]
    log.debug(f"MMC eigenvalues: {np.round(eigenvalues[order], 6).tolist()}")
    return MmcProjection(
        basis=basis,
        eigenvalues=eigenvalues[order],
        feature_mean=mean,
        feature_scale=scale,
    )


def mmc_project(projection: MmcProjection, v: np.ndarray) -> np.ndarray:
    """Standardize `v` (one vector or rows of vectors) and apply the basis.

    Raises:
        ShapeError: If the vector dimension does not match the projection.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != projection.input_dim:
        raise ShapeError(
            f"Vector of dimension {v.shape[-1]} does not match the projection's"
            f" {projection.input_dim}"
        )
    return projection.standardize(v) @ projection.basis.T
