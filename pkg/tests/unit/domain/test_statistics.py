"""
Unit tests for evaluation statistics, the PL-kNN baseline and the standardizer.
"""

import numpy as np
import pytest

from src.domain.entities import PLLDataset
from src.domain.exceptions import InvalidParameterException, ShapeMismatchException
from src.domain.services import PlKnn, accuracy, mean_std, not_significantly_worse, plknn, welch_ttest
from src.domain.value_objects import Standardizer


@pytest.mark.unit
class TestAccuracy:
    """Test exact-match accuracy."""

    @pytest.mark.parametrize(
        "predictions,truth,expected",
        [
            ([0, 1, 2], [0, 1, 2], 1.0),
            ([1, 2, 0], [0, 1, 2], 0.0),
            ([0, 1, 2, 2], [0, 1, 2, 0], 0.75),
        ],
    )
    def test_values(self, predictions, truth, expected):
        """Test all correct, all wrong and three of four."""
        assert accuracy(np.array(predictions), np.array(truth)) == expected

    def test_length_mismatch_raises(self):
        """Test that predictions and truth must align."""
        with pytest.raises(ShapeMismatchException):
            accuracy(np.array([0, 1]), np.array([0]))

    def test_mean_std(self):
        """Test sample statistics with ddof = 1."""
        mean, std = mean_std([1.0, 2.0, 3.0])
        assert mean == pytest.approx(2.0)
        assert std == pytest.approx(1.0)
        assert mean_std([0.7]) == (0.7, 0.0)


@pytest.mark.unit
class TestWelch:
    """Test the unequal-variance t-test."""

    def test_shifted_samples(self):
        """Test (1..5) against (2..6): t = -1, p about 0.347."""
        result = welch_ttest([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert result.t == pytest.approx(-1.0)
        assert result.dof == pytest.approx(8.0)
        assert result.p == pytest.approx(0.347, abs=1e-3)

    def test_symmetric_in_sign(self):
        """Test swapping samples flips t and keeps p."""
        a, b = [0.9, 0.8, 0.85], [0.7, 0.75, 0.72]
        forward, backward = welch_ttest(a, b), welch_ttest(b, a)
        assert forward.t == pytest.approx(-backward.t)
        assert forward.p == pytest.approx(backward.p)

    def test_identical_samples(self):
        """Test a = b gives t = 0 and p = 1."""
        result = welch_ttest([0.1, 0.4, 0.3], [0.1, 0.4, 0.3])
        assert result.t == pytest.approx(0.0)
        assert result.p == pytest.approx(1.0)

    def test_zero_variance_equal_means(self):
        """Test the degenerate case with equal means gives p = 1."""
        assert welch_ttest([0.5, 0.5], [0.5, 0.5]).p == 1.0

    def test_zero_variance_unequal_means(self):
        """Test the degenerate case with different means gives p = 0."""
        result = welch_ttest([0.5, 0.5], [0.7, 0.7])
        assert result.p == 0.0
        assert result.t == -np.inf

    def test_needs_two_values(self):
        """Test each sample needs two values."""
        with pytest.raises(InvalidParameterException):
            welch_ttest([1.0], [1.0, 2.0])


@pytest.mark.unit
class TestNotSignificantlyWorse:
    """Test significance marking against the best method."""

    def test_clear_loser_is_not_flagged(self):
        """Test a consistently worse method is not flagged."""
        flags = not_significantly_worse(
            {"vipll": [0.90, 0.91, 0.92, 0.90, 0.91], "plknn": [0.60, 0.61, 0.59, 0.60, 0.62]}
        )
        assert flags == {"vipll": True, "plknn": False}

    def test_overlapping_methods_both_flagged(self):
        """Test noisy near-equal methods are both flagged."""
        flags = not_significantly_worse({"a": [0.8, 0.9, 0.7], "b": [0.75, 0.85, 0.8]})
        assert flags == {"a": True, "b": True}

    def test_single_seed_only_best_flagged(self):
        """Test a method with one result is flagged only if it is the best."""
        assert not_significantly_worse({"a": [0.9], "b": [0.8]}) == {"a": True, "b": False}

    def test_empty(self):
        """Test no methods give no flags."""
        assert not_significantly_worse({}) == {}


@pytest.mark.unit
class TestPlKnn:
    """Test the PL-kNN baseline."""

    def test_single_training_point(self):
        """Test one point with candidate set {2} predicts class 2 everywhere."""
        train = PLLDataset(np.zeros((1, 2)), np.array([[0, 0, 1]], dtype=bool))
        predictions = PlKnn(10).fit(train).predict(np.array([[5.0, -3.0], [0.0, 0.0]]))
        np.testing.assert_array_equal(predictions, [2, 2])

    def test_exact_match_with_one_neighbour(self):
        """Test a query on a singleton training point returns its label."""
        train = PLLDataset(
            np.array([[0.0, 0.0], [10.0, 10.0]]),
            np.array([[1, 0], [0, 1]], dtype=bool),
        )
        assert PlKnn(1).fit(train).predict(np.array([[10.0, 10.0]]))[0] == 1

    def test_votes_are_normalized(self, partial_blobs):
        """Test vote vectors are distributions."""
        votes = plknn(partial_blobs, partial_blobs.features[:5], k_neighbors=4)
        np.testing.assert_allclose(votes.sum(axis=1), 1.0)

    def test_separated_blobs(self, partial_blobs):
        """Test high accuracy on well-separated data."""
        predictions = PlKnn(5).fit(partial_blobs).predict(partial_blobs.features)
        assert accuracy(predictions, partial_blobs.true_labels) >= 0.9

    def test_predict_before_fit_raises(self):
        """Test that an unfitted model refuses to predict."""
        with pytest.raises(InvalidParameterException):
            PlKnn(3).predict(np.zeros((1, 2)))

    def test_invalid_neighbours(self):
        """Test k_neighbors >= 1."""
        with pytest.raises(InvalidParameterException):
            PlKnn(0)

    def test_feature_dimension_mismatch(self, partial_blobs):
        """Test queries must match the training dimension."""
        with pytest.raises(ShapeMismatchException):
            PlKnn(3).fit(partial_blobs).predict(np.zeros((1, 5)))


@pytest.mark.unit
class TestStandardizer:
    """Test z-scoring."""

    def test_fit_apply(self):
        """Test zero mean and unit scale after fitting; constant columns keep scale 1."""
        features = np.array([[1.0, 5.0], [3.0, 5.0]])
        standardizer = Standardizer.fit(features)
        np.testing.assert_allclose(standardizer.apply(features), [[-1.0, 0.0], [1.0, 0.0]])

    def test_dict_round_trip(self):
        """Test serialization keeps the affine map."""
        standardizer = Standardizer.fit(np.array([[1.0, 2.0], [3.0, 6.0]]))
        restored = Standardizer.from_dict(standardizer.to_dict())
        np.testing.assert_array_equal(restored.mean, standardizer.mean)
        np.testing.assert_array_equal(restored.scale, standardizer.scale)

    def test_dimension_mismatch(self):
        """Test inputs must have the fitted width."""
        with pytest.raises(ShapeMismatchException):
            Standardizer.identity(2).apply(np.zeros((1, 3)))
