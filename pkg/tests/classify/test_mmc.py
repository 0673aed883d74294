import numpy as np
import pytest

from aertools.classify import mmc_fit, mmc_project, scatter_matrices
from aertools.errors import InsufficientClassesError, ParameterError, ShapeError


@pytest.fixture(scope="module")
def labelled_points():
    rng = np.random.default_rng(31)
    centres = {"angry": [3, 0, 0, 1], "sad": [0, 3, 0, 1], "fear": [0, 0, 3, 1]}
    x, labels = [], []
    for label, centre in centres.items():
        x.append(rng.normal(centre, [1.0, 1.0, 1.0, 0.2], size=(30, 4)))
        labels += [label] * 30
    return np.vstack(x), labels


class TestScatter:
    def test_two_point_example(self):
        # GIVEN one vector per class, placed symmetrically about the origin
        s_b, s_w = scatter_matrices(np.array([[1.0, 0.0], [-1.0, 0.0]]), ["a", "b"])
        # THEN only the between-class scatter is non-zero
        np.testing.assert_allclose(s_b, [[1.0, 0.0], [0.0, 0.0]])
        np.testing.assert_allclose(s_w, np.zeros((2, 2)))

    def test_identical_vectors(self):
        s_b, s_w = scatter_matrices(np.ones((4, 3)), ["a", "a", "b", "b"])
        np.testing.assert_array_equal(s_b, np.zeros((3, 3)))
        np.testing.assert_array_equal(s_w, np.zeros((3, 3)))

    def test_sum_is_total_scatter(self, labelled_points):
        x, labels = labelled_points
        s_b, s_w = scatter_matrices(x, labels)
        np.testing.assert_allclose(s_b + s_w, np.cov(x.T, bias=True), atol=1e-10)

    def test_single_class(self):
        with pytest.raises(InsufficientClassesError):
            scatter_matrices(np.eye(3), ["a", "a", "a"])

    def test_label_count(self):
        with pytest.raises(ShapeError):
            scatter_matrices(np.eye(3), ["a", "b"])


class TestFit:
    def test_basis_is_orthonormal(self, labelled_points):
        x, labels = labelled_points
        projection = mmc_fit(x, labels, 3)
        assert projection.basis.shape == (3, 4)
        np.testing.assert_allclose(
            projection.basis @ projection.basis.T, np.eye(3), atol=1e-10
        )

    @pytest.mark.parametrize("d", [1, 2, 4])
    def test_objective_is_top_eigenvalue_sum(self, labelled_points, d):
        # GIVEN a fitted projection
        x, labels = labelled_points
        projection = mmc_fit(x, labels, d)
        # WHEN the margin criterion is evaluated on its basis
        s_b, s_w = scatter_matrices(projection.standardize(x), labels)
        w = projection.basis
        objective = np.trace(w @ (s_b - s_w) @ w.T)
        # THEN it equals the sum of the d largest eigenvalues
        top = np.sort(np.linalg.eigvalsh(s_b - s_w))[::-1][:d]
        assert objective == pytest.approx(top.sum(), abs=1e-9)
        np.testing.assert_allclose(projection.eigenvalues, top, atol=1e-9)

    def test_mean_projects_to_origin(self, labelled_points):
        x, labels = labelled_points
        projection = mmc_fit(x, labels, 2)
        np.testing.assert_allclose(
            mmc_project(projection, x.mean(axis=0)), [0.0, 0.0], atol=1e-12
        )

    def test_projects_rows(self, labelled_points):
        x, labels = labelled_points
        projection = mmc_fit(x, labels, 2)
        assert mmc_project(projection, x).shape == (90, 2)

    def test_refit_is_reproducible(self, labelled_points):
        x, labels = labelled_points
        a, b = mmc_fit(x, labels, 2), mmc_fit(x, labels, 2)
        np.testing.assert_array_equal(a.basis, b.basis)

    def test_constant_dimension(self, caplog):
        x = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0], [4.0, 5.0]])
        projection = mmc_fit(x, ["a", "a", "b", "b"], 1)
        assert projection.feature_scale[1] == 1.0
        assert any("zero variance" in r.message for r in caplog.records)

    @pytest.mark.parametrize("d", [0, 5])
    def test_dimension_out_of_range(self, labelled_points, d):
        x, labels = labelled_points
        with pytest.raises(ParameterError):
            mmc_fit(x, labels, d)

    def test_query_dimension(self, labelled_points):
        x, labels = labelled_points
        projection = mmc_fit(x, labels, 2)
        with pytest.raises(ShapeError):
            mmc_project(projection, np.zeros(3))

    def test_aligns_with_class_mean_difference(self):
        # GIVEN two classes separated along one direction in 5-D isotropic noise
        rng = np.random.default_rng(41)
        direction = np.array([1.0, 1.0, 0.0, 0.0, 0.0]) / np.sqrt(2)
        x = np.vstack(
            [
                rng.standard_normal((500, 5)) + 4 * direction,
                rng.standard_normal((500, 5)) - 4 * direction,
            ]
        )
        labels = ["angry"] * 500 + ["sad"] * 500
        # WHEN a one-dimensional projection is fitted
        projection = mmc_fit(x, labels, 1)
        # THEN it points along the standardized mean difference within 5 degrees
        z = projection.standardize(x)
        difference = z[:500].mean(axis=0) - z[500:].mean(axis=0)
        cosine = abs(projection.basis[0] @ difference) / np.linalg.norm(difference)
        assert np.degrees(np.arccos(min(cosine, 1.0))) <= 5.0


def naive_margin_matrix(x, labels):
    """S_b - S_w of z-scored rows, accumulated class by class."""
    z = (x - x.mean(axis=0)) / x.std(axis=0)
    labels = np.array(labels)
    dim = x.shape[1]
    s_b, s_w = np.zeros((dim, dim)), np.zeros((dim, dim))
    for label in set(labels.tolist()):
        members = z[labels == label]
        prior = len(members) / len(z)
        offset = members.mean(axis=0) - z.mean(axis=0)
        s_b += prior * np.outer(offset, offset)
        s_w += prior * np.cov(members.T, bias=True)
    return s_b - s_w


@pytest.mark.parametrize("dim", [4, 7, 11, 17])
def test_eigenvalues_match_independent_solver(dim):
    # GIVEN three random classes in `dim` dimensions
    rng = np.random.default_rng(dim)
    centres = np.repeat(rng.normal(0.0, 2.0, size=(3, dim)), 20, axis=0)
    x = rng.standard_normal((60, dim)) + centres
    labels = ["a"] * 20 + ["b"] * 20 + ["c"] * 20
    # WHEN every direction is kept
    projection = mmc_fit(x, labels, dim)
    # THEN the eigenvalues agree with numpy's solver on the margin matrix
    expected = np.sort(np.linalg.eigvalsh(naive_margin_matrix(x, labels)))[::-1]
    np.testing.assert_allclose(projection.eigenvalues, expected, atol=1e-6)
