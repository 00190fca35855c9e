"""
Unit tests for the classifier, CVAE and probe networks.
"""

import numpy as np
import pytest

from src.domain.autodiff import Tensor, ops
from src.domain.exceptions import InvalidParameterException, ShapeMismatchException
from src.domain.models import (
    MLP,
    ClassifierNet,
    CvaeNets,
    ProbeClassifier,
    classifier_alpha,
    cvae_forward,
    predict,
    recon_loglik,
    sigma_ema_update,
)


def _zero_output(net: ClassifierNet) -> None:
    net.mlp.output_layer.weight.data[...] = 0.0
    net.mlp.output_layer.bias.data[...] = 0.0


@pytest.mark.unit
class TestClassifierNet:
    """Test the Dirichlet classifier head."""

    def test_zero_output_layer_gives_uniform_alpha(self, rng):
        """Test alpha = 1 + log 2 everywhere when the last layer is zero."""
        net = ClassifierNet(2, 3, rng, hidden=8)
        _zero_output(net)
        alpha = classifier_alpha(net, rng.standard_normal((4, 2)), np.ones((4, 3))).alpha.data
        np.testing.assert_allclose(alpha, 1.0 + np.log(2.0))

    def test_zero_output_layer_predicts_uniform(self, rng):
        """Test predict returns 1/k per class."""
        net = ClassifierNet(2, 4, rng, hidden=8)
        _zero_output(net)
        np.testing.assert_allclose(predict(net, rng.standard_normal((5, 2))), 0.25)

    def test_alpha_at_least_one(self, rng):
        """Test the softplus + 1 head keeps alpha >= 1."""
        net = ClassifierNet(3, 5, rng, hidden=8)
        s = rng.random((20, 5)) < 0.5
        s[:, 0] = True
        alpha = classifier_alpha(net, 10.0 * rng.standard_normal((20, 3)), s).alpha.data
        assert np.all(alpha >= 1.0)

    def test_predict_rows_sum_to_one_and_restore_mode(self, rng):
        """Test predictions are distributions and the training flag survives."""
        net = ClassifierNet(2, 3, rng, hidden=8)
        probs = predict(net, rng.standard_normal((6, 2)))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0)
        assert net.training

    def test_single_row_input_is_promoted(self, rng):
        """Test that a (d,) input is treated as one row."""
        net = ClassifierNet(2, 3, rng, hidden=8)
        assert predict(net, np.zeros(2)).shape == (1, 3)

    def test_wrong_feature_dimension_raises(self, rng):
        """Test that x must have d columns."""
        net = ClassifierNet(2, 3, rng, hidden=8)
        with pytest.raises(ShapeMismatchException):
            classifier_alpha(net, np.zeros((4, 3)), np.ones((4, 3)))

    def test_state_dict_round_trip(self, rng):
        """Test that loading a state reproduces predictions."""
        source = ClassifierNet(2, 3, rng, hidden=8)
        target = ClassifierNet(2, 3, np.random.default_rng(99), hidden=8)
        target.load_state_dict(source.state_dict())
        x = rng.standard_normal((5, 2))
        np.testing.assert_allclose(predict(source, x), predict(target, x))

    def test_state_dict_shape_mismatch_raises(self, rng):
        """Test that loading weights of another architecture fails."""
        state = ClassifierNet(2, 3, rng, hidden=8).state_dict()
        with pytest.raises(ShapeMismatchException):
            ClassifierNet(2, 3, rng, hidden=16).load_state_dict(state)


@pytest.mark.unit
class TestMLP:
    """Test the multilayer perceptron."""

    def test_needs_two_sizes(self, rng):
        """Test that a single width is not a network."""
        with pytest.raises(ShapeMismatchException):
            MLP([3], rng)

    def test_batch_norm_updates_running_stats_in_training(self, rng):
        """Test running buffers move only in training mode."""
        mlp = MLP([2, 4, 1], rng)
        x = Tensor(rng.standard_normal((8, 2)) + 3.0)
        mlp(x)
        moved = mlp.norms[0].running_mean.copy()
        assert not np.allclose(moved, 0.0)
        mlp.eval()
        mlp(x)
        np.testing.assert_array_equal(mlp.norms[0].running_mean, moved)


@pytest.mark.unit
class TestCvae:
    """Test the conditional VAE."""

    def test_forward_shapes(self, rng):
        """Test encoder, sample and decoder shapes."""
        nets = CvaeNets(3, 4, rng, m=2, hidden=8)
        y = np.full((5, 4), 0.25)
        posterior, z, mu = cvae_forward(nets, rng.standard_normal((5, 3)), y, rng)
        assert posterior.mu.shape == (5, 2)
        assert posterior.log_var.shape == (5, 2)
        assert z.shape == (5, 2)
        assert mu.shape == (5, 3)

    def test_forward_deterministic_with_fixed_noise(self, rng):
        """Test that explicit noise removes sampling randomness."""
        nets = CvaeNets(2, 2, rng, m=2, hidden=8)
        nets.eval()
        x = rng.standard_normal((3, 2))
        y = np.full((3, 2), 0.5)
        noise = rng.standard_normal((3, 2))
        a = cvae_forward(nets, x, y, np.random.default_rng(1), noise=noise)[2].data
        b = cvae_forward(nets, x, y, np.random.default_rng(2), noise=noise)[2].data
        np.testing.assert_array_equal(a, b)

    def test_gradient_flows_into_labels(self, rng):
        """Test that the decoder output depends on y through the tape."""
        nets = CvaeNets(2, 3, rng, m=2, hidden=8)
        y = Tensor(np.full((4, 3), 1.0 / 3.0), requires_grad=True)
        mu = cvae_forward(nets, rng.standard_normal((4, 2)), y, rng)[2]
        ops.sum(mu).backward()
        assert y.grad is not None
        assert y.grad.shape == (4, 3)

    @pytest.mark.parametrize(
        "kwargs",
        [{"sigma_init": 0.0}, {"sigma_ema_decay": 1.0}, {"sigma_ema_decay": 0.0}],
    )
    def test_invalid_sigma_settings_raise(self, rng, kwargs):
        """Test construction-time validation of the noise scale settings."""
        with pytest.raises(InvalidParameterException):
            CvaeNets(2, 2, rng, m=2, hidden=8, **kwargs)


@pytest.mark.unit
class TestReconstruction:
    """Test the Gaussian reconstruction log-likelihood."""

    def test_perfect_reconstruction_one_dim(self):
        """Test -log(2 pi) / 2 at zero error."""
        assert recon_loglik(np.array([[0.0]]), Tensor([[0.0]]), 1.0).item() == pytest.approx(-0.918939, abs=1e-6)

    def test_unit_error_one_dim(self):
        """Test an extra -1/2 for unit squared error."""
        assert recon_loglik(np.array([[1.0]]), Tensor([[0.0]]), 1.0).item() == pytest.approx(-1.418939, abs=1e-6)

    def test_doubling_sigma_at_zero_error(self):
        """Test doubling sigma costs d log 2 at zero error for d = 3."""
        x = np.zeros((1, 3))
        base = recon_loglik(x, Tensor(x), 1.0).item()
        wider = recon_loglik(x, Tensor(x), 2.0).item()
        assert wider - base == pytest.approx(-3.0 * np.log(2.0))

    def test_non_positive_sigma_raises(self):
        """Test that sigma must be positive."""
        with pytest.raises(InvalidParameterException):
            recon_loglik(np.zeros((1, 1)), Tensor([[0.0]]), 0.0)

    def test_shape_mismatch_raises(self):
        """Test that x and its reconstruction must align."""
        with pytest.raises(ShapeMismatchException):
            recon_loglik(np.zeros((2, 2)), Tensor(np.zeros((2, 3))), 1.0)


@pytest.mark.unit
class TestSigmaEma:
    """Test the decoder noise-scale moving average."""

    def test_fixed_point(self, rng):
        """Test sigma stays at 1 when the observed RMSE is 1."""
        nets = CvaeNets(2, 2, rng, m=2, hidden=8, sigma_ema_decay=0.9)
        assert sigma_ema_update(nets, 1.0) == pytest.approx(1.0)

    def test_floor_applies_to_observation(self, rng):
        """Test that an RMSE below the floor is lifted to it."""
        nets = CvaeNets(2, 2, rng, m=2, hidden=8, sigma_ema_decay=0.9, sigma_floor=0.01)
        assert sigma_ema_update(nets, 0.0) == pytest.approx(0.901)

    def test_converges_to_constant_rmse(self, rng):
        """Test repeated updates approach a constant observation."""
        nets = CvaeNets(2, 2, rng, m=2, hidden=8, sigma_ema_decay=0.9)
        for _ in range(200):
            sigma_ema_update(nets, 0.5)
        assert nets.sigma == pytest.approx(0.5, abs=1e-6)

    def test_negative_rmse_raises(self, rng):
        """Test that an RMSE cannot be negative."""
        nets = CvaeNets(2, 2, rng, m=2, hidden=8)
        with pytest.raises(InvalidParameterException):
            sigma_ema_update(nets, -0.1)


@pytest.mark.unit
class TestProbeClassifier:
    """Test the supervised probe network."""

    def test_probabilities_sum_to_one(self, rng):
        """Test softmax outputs."""
        probe = ProbeClassifier(2, 3, rng, hidden=8)
        probs = probe.predict_proba(rng.standard_normal((7, 2)))
        assert probs.shape == (7, 3)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0)

    def test_cross_entropy_of_uniform_output(self, rng):
        """Test the loss is log k for a zeroed output layer."""
        probe = ProbeClassifier(2, 4, rng, hidden=8)
        probe.mlp.output_layer.weight.data[...] = 0.0
        loss = probe.cross_entropy(rng.standard_normal((6, 2)), np.array([0, 1, 2, 3, 0, 1]))
        assert loss.item() == pytest.approx(np.log(4.0))
