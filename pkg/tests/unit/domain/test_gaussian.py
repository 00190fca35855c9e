"""
Unit tests for diagonal Gaussians and log-sum-exp.
"""

import numpy as np
import pytest

from src.domain.autodiff import Tensor
from src.domain.distributions import (
    gaussian_log_prob,
    kl_gaussian_std,
    log_sum_exp,
    sample_gaussian,
    standard_normal_log_prob,
)
from src.domain.exceptions import DomainViolationException, InvalidParameterException, ShapeMismatchException
from src.domain.value_objects import GaussianDiag


@pytest.mark.unit
class TestGaussianKl:
    """Test KL to the standard normal."""

    @pytest.mark.parametrize(
        "mu,log_var,expected",
        [
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.5),
            (0.0, 1.0, (np.e - 2.0) / 2.0),
        ],
    )
    def test_known_values(self, mu, log_var, expected):
        """Test KL(N(mu, e^log_var) || N(0, 1))."""
        g = GaussianDiag(Tensor([[mu]]), Tensor([[log_var]]))
        assert kl_gaussian_std(g).data[0] == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_monte_carlo(self, seed):
        """Test the closed form against the sample mean of log q(z) - log N(z; 0, I) under q."""
        rng = np.random.default_rng(700 + seed)
        m = int(rng.integers(1, 5))
        g = GaussianDiag(Tensor(rng.normal(0.0, 1.5, size=(1, m))), Tensor(rng.uniform(-2.0, 1.0, size=(1, m))))
        z = sample_gaussian(g, rng, n_samples=20000)
        log_ratio = (gaussian_log_prob(z, g) - standard_normal_log_prob(z)).data[:, 0]
        se = log_ratio.std() / np.sqrt(log_ratio.size)
        assert abs(kl_gaussian_std(g).data[0] - log_ratio.mean()) < 3 * se + 1e-3

    def test_shape_mismatch_raises(self):
        """Test that mu and log_var must share a shape."""
        with pytest.raises(ShapeMismatchException):
            GaussianDiag(Tensor(np.zeros(2)), Tensor(np.zeros(3)))

    def test_nan_log_var_rejected(self):
        """Test that NaN log-variances are refused."""
        with pytest.raises(DomainViolationException):
            GaussianDiag(Tensor([0.0]), Tensor([np.nan]))


@pytest.mark.unit
class TestSampleGaussian:
    """Test reparameterized draws."""

    def test_negative_infinite_log_var_clamps(self, rng):
        """Test that log_var = -inf is clamped so draws collapse onto mu."""
        g = GaussianDiag(Tensor([[1.5, -2.0]]), Tensor([[-np.inf, -np.inf]]))
        z = sample_gaussian(g, rng, n_samples=10).data
        assert np.all(np.isfinite(z))
        np.testing.assert_allclose(z, np.broadcast_to([[1.5, -2.0]], (10, 1, 2)), atol=1e-3)

    def test_unit_variance_draws(self, rng):
        """Test that the empirical variance of N(0, 1) draws is near one."""
        g = GaussianDiag(Tensor(np.zeros((1, 1))), Tensor(np.zeros((1, 1))))
        z = sample_gaussian(g, rng, n_samples=20000).data
        assert z.var() == pytest.approx(1.0, abs=0.05)

    def test_explicit_noise_is_used(self, rng):
        """Test z = mu + sigma * noise with supplied noise."""
        g = GaussianDiag(Tensor([[1.0]]), Tensor([[np.log(4.0)]]))
        z = sample_gaussian(g, rng, noise=np.array([[0.5]]))
        assert z.item() == pytest.approx(2.0)

    def test_log_prob_of_standard_normal_at_zero(self):
        """Test log N(0; 0, 1) in one and two dimensions."""
        g = GaussianDiag(Tensor(np.zeros(1)), Tensor(np.zeros(1)))
        assert gaussian_log_prob(Tensor(np.zeros(1)), g).item() == pytest.approx(-0.918939, abs=1e-6)
        assert standard_normal_log_prob(Tensor(np.zeros(2))).item() == pytest.approx(-1.837877, abs=1e-6)


@pytest.mark.unit
class TestLogSumExp:
    """Test the stable log-sum-exp."""

    def test_two_zeros(self):
        """Test lse(0, 0) = log 2."""
        assert log_sum_exp(np.array([0.0, 0.0])).item() == pytest.approx(np.log(2.0))

    def test_large_values_do_not_overflow(self):
        """Test lse(1000, 1000) = 1000 + log 2."""
        assert log_sum_exp(np.array([1000.0, 1000.0])).item() == pytest.approx(1000.0 + np.log(2.0))

    def test_single_element(self):
        """Test that one value reduces to itself."""
        assert log_sum_exp(np.array([-3.5])).item() == pytest.approx(-3.5)

    def test_axis_reduction(self):
        """Test reduction along an axis."""
        out = log_sum_exp(np.array([[0.0, 0.0], [1.0, 1.0]]), axis=0).data
        np.testing.assert_allclose(out, np.log(np.exp(0.0) + np.exp(1.0)) * np.ones(2))

    def test_gradient_is_softmax(self):
        """Test d lse / dx = softmax(x)."""
        x = Tensor(np.array([1.0, 2.0, 3.0]), requires_grad=True)
        log_sum_exp(x).backward()
        expected = np.exp([1.0, 2.0, 3.0]) / np.exp([1.0, 2.0, 3.0]).sum()
        np.testing.assert_allclose(x.grad, expected)

    def test_empty_raises(self):
        """Test that an empty input is an error."""
        with pytest.raises(InvalidParameterException):
            log_sum_exp(np.array([]))
