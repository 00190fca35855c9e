"""
Unit tests for Dirichlet sampling, pathwise gradients and divergences.
"""

import numpy as np
import pytest

from src.domain.autodiff import Tensor, ops
from src.domain.distributions import (
    SIMPLEX_EPS,
    DirichletSample,
    dirichlet_log_prob,
    dirichlet_rsample,
    dirichlet_sample_grad,
    expected_log_subset_mass,
    kl_dirichlet,
    sample_dirichlet,
)
from src.domain.exceptions import DomainViolationException, MissingSampleStateException, ShapeMismatchException
from src.domain.value_objects import DirichletParams


@pytest.mark.unit
class TestSampleDirichlet:
    """Test Dirichlet draws."""

    def test_samples_lie_on_simplex(self, rng):
        """Test non-negative components summing to one."""
        sample = sample_dirichlet(DirichletParams.of([0.3, 1.0, 5.0]), rng, n_samples=500)
        assert sample.values.shape == (500, 3)
        assert np.all(sample.values >= SIMPLEX_EPS)
        np.testing.assert_allclose(sample.values.sum(axis=-1), 1.0, atol=1e-12)

    @pytest.mark.parametrize(
        "alpha,expected",
        [
            ([1.0, 1.0, 1.0], [1 / 3, 1 / 3, 1 / 3]),
            ([10.0, 1.0], [10 / 11, 1 / 11]),
        ],
    )
    def test_sample_mean_matches_alpha(self, rng, alpha, expected):
        """Test that the sample mean lies within four standard errors of alpha / alpha_0."""
        n = 20000
        alpha = np.array(alpha)
        values = sample_dirichlet(DirichletParams.of(alpha), rng, n_samples=n).values
        a0 = alpha.sum()
        mean = alpha / a0
        se = np.sqrt(mean * (1 - mean) / (a0 + 1) / n)
        assert np.all(np.abs(values.mean(axis=0) - np.array(expected)) < 4 * se)

    def test_non_positive_alpha_rejected(self):
        """Test that a zero concentration is refused."""
        with pytest.raises(DomainViolationException):
            DirichletParams.of([1.0, 0.0])

    def test_same_generator_state_is_reproducible(self):
        """Test identical seeds give identical draws."""
        params = DirichletParams.of([2.0, 3.0])
        a = sample_dirichlet(params, np.random.default_rng(5)).values
        b = sample_dirichlet(params, np.random.default_rng(5)).values
        np.testing.assert_array_equal(a, b)


@pytest.mark.unit
class TestPathwiseGradient:
    """Test implicit reparameterization gradients."""

    def test_mean_gradient_at_uniform_alpha(self, rng):
        """Test d E[y_1] / d alpha is about (+0.25, -0.25) at alpha = (1, 1)."""
        n = 40000
        sample = sample_dirichlet(DirichletParams.of([1.0, 1.0]), rng, n_samples=n)
        upstream = np.tile([1.0, 0.0], (n, 1))
        grad = dirichlet_sample_grad(sample, upstream).mean(axis=0)
        np.testing.assert_allclose(grad, [0.25, -0.25], atol=0.02)

    def test_rsample_backward_matches_mean_derivative(self, rng):
        """Test the tape node for an asymmetric alpha against the analytic derivative of the mean."""
        alpha = Tensor(np.array([2.0, 3.0]), requires_grad=True)
        n = 40000
        y = dirichlet_rsample(DirichletParams(alpha), rng, n_samples=n)
        ops.mean(ops.sum(y * np.array([1.0, 0.0]), axis=-1)).backward()
        # d/da1 a1/(a1+a2) = a2/a0^2, d/da2 = -a1/a0^2
        np.testing.assert_allclose(alpha.grad, [3 / 25, -2 / 25], atol=0.01)

    @pytest.mark.parametrize("seed", range(10))
    def test_mean_gradient_at_random_alpha(self, seed):
        """Test that per-sample gradients of y_1 average to the derivative of alpha_1 / alpha_0."""
        rng = np.random.default_rng(500 + seed)
        k = int(rng.integers(2, 7))
        alpha = rng.uniform(0.5, 5.0, size=k)
        n = 40000
        sample = sample_dirichlet(DirichletParams.of(alpha), rng, n_samples=n)
        upstream = np.zeros((n, k))
        upstream[:, 0] = 1.0
        grads = dirichlet_sample_grad(sample, upstream)

        a0 = alpha.sum()
        exact = np.full(k, -alpha[0] / a0**2)
        exact[0] = (a0 - alpha[0]) / a0**2
        se = grads.std(axis=0) / np.sqrt(n)
        assert np.all(np.abs(grads.mean(axis=0) - exact) < 5 * se + 1e-3)

    def test_missing_gamma_draws_raise(self):
        """Test that a sample without Gamma variates cannot be differentiated."""
        sample = DirichletSample(values=np.array([0.5, 0.5]), gamma_draws=None, alpha=np.ones(2))
        with pytest.raises(MissingSampleStateException):
            dirichlet_sample_grad(sample, np.ones(2))

    def test_shape_mismatch_raises(self, rng):
        """Test that the upstream gradient must match the sample shape."""
        sample = sample_dirichlet(DirichletParams.of([1.0, 1.0]), rng)
        with pytest.raises(ShapeMismatchException):
            dirichlet_sample_grad(sample, np.ones(3))


@pytest.mark.unit
class TestDirichletDivergences:
    """Test closed-form KL, density and expectations."""

    def test_kl_of_identical_is_zero(self):
        """Test KL(q || q) = 0."""
        q = DirichletParams.of([[2.0, 0.5, 3.0]])
        assert kl_dirichlet(q, q).data[0] == pytest.approx(0.0, abs=1e-12)

    def test_kl_known_value(self):
        """Test KL(Dir(2, 1) || Dir(1, 1)) = log 2 - 1/2."""
        kl = kl_dirichlet(DirichletParams.of([2.0, 1.0]), DirichletParams.of([1.0, 1.0])).item()
        assert kl == pytest.approx(np.log(2.0) - 0.5, abs=1e-9)
        assert kl == pytest.approx(0.193147, abs=1e-6)

    def test_kl_is_per_row_and_broadcasts_prior(self):
        """Test that a (k,) prior broadcasts over rows of q."""
        q = DirichletParams.of([[1.0, 1.0], [2.0, 1.0]])
        kl = kl_dirichlet(q, DirichletParams.of([1.0, 1.0])).data
        np.testing.assert_allclose(kl, [0.0, np.log(2.0) - 0.5], atol=1e-9)

    def test_kl_non_negative(self, rng):
        """Test KL >= 0 for random pairs."""
        q = DirichletParams.of(rng.uniform(0.5, 5.0, size=(50, 4)))
        p = DirichletParams.of(rng.uniform(0.5, 5.0, size=4))
        assert np.all(kl_dirichlet(q, p).data >= -1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_kl_matches_monte_carlo(self, seed):
        """Test the closed form against the sample mean of log q(y) - log p(y) under q."""
        rng = np.random.default_rng(900 + seed)
        k = int(rng.integers(2, 6))
        q = DirichletParams.of(rng.uniform(0.5, 5.0, size=k))
        p = DirichletParams.of(rng.uniform(0.5, 5.0, size=k))
        values = sample_dirichlet(q, rng, n_samples=20000).values
        log_ratio = dirichlet_log_prob(q, values) - dirichlet_log_prob(p, values)
        se = log_ratio.std() / np.sqrt(values.shape[0])
        assert abs(kl_dirichlet(q, p).item() - log_ratio.mean()) < 3 * se + 1e-3

    def test_kl_dimension_mismatch_raises(self):
        """Test that q and p must share k."""
        with pytest.raises(ShapeMismatchException):
            kl_dirichlet(DirichletParams.of([1.0, 1.0]), DirichletParams.of([1.0, 1.0, 1.0]))

    def test_log_prob_of_flat_dirichlet(self):
        """Test Dir(1, 1, 1) has constant density Gamma(3) = 2."""
        log_p = dirichlet_log_prob(DirichletParams.of([1.0, 1.0, 1.0]), np.array([[0.2, 0.3, 0.5]]))
        assert log_p[0] == pytest.approx(np.log(2.0))

    def test_expected_log_subset_mass_matches_monte_carlo(self, rng):
        """Test the digamma closed form against sampling."""
        params = DirichletParams.of([1.5, 2.0, 0.7, 3.0])
        mask = np.array([1.0, 0.0, 1.0, 0.0])
        exact = expected_log_subset_mass(params, mask).item()
        values = sample_dirichlet(params, rng, n_samples=40000).values
        estimate = np.log((values * mask).sum(axis=-1)).mean()
        assert exact == pytest.approx(estimate, abs=0.02)

    def test_full_subset_has_zero_expected_log_mass(self):
        """Test that the full label set has mass one."""
        params = DirichletParams.of([1.5, 2.0, 0.7])
        assert expected_log_subset_mass(params, np.ones(3)).item() == pytest.approx(0.0, abs=1e-12)
