"""
Training Service.

This module runs the full training procedure: solve the prior, warm up the
CVAE on the initial label table, then alternate classifier, CVAE and
label-table updates for every mini-batch.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ...domain.autodiff import Adam, Tensor, ops
from ...domain.distributions import kl_gaussian_std
from ...domain.entities import ElboBreakdown, LabelTable, PLLDataset, update_labels
from ...domain.exceptions import DomainException
from ...domain.models import ClassifierNet, CvaeNets, cvae_forward, predict, recon_loglik, sigma_ema_update
from ...domain.services import MiniBatch, ablation_loss, beta_elbo_batch, build_prior, shuffled_batches
from ...domain.value_objects import PriorVector, Standardizer
from ...infrastructure.checkpoints import CheckpointStore, ModelCheckpoint
from ...infrastructure.metrics import MetricsWriter
from ..dto import TrainConfig
from ..exceptions import TrainingDivergedException

logger = logging.getLogger(__name__)


@dataclass
class EpochMetrics:
    """
    Batch-averaged objective terms of one main-loop epoch.

    Attributes:
        epoch: 1-based epoch number.
        generative_term: Mean generative term (0 for the ablation).
        candidate_term: Mean candidate term.
        kl_term: Mean KL term.
        total: Mean objective value (higher is better).
        wall_ms: Epoch wall-clock time in milliseconds.
        candidate_coverage: Mean predicted mass on the candidate sets.
    """

    epoch: int
    generative_term: float
    candidate_term: float
    kl_term: float
    total: float
    wall_ms: float
    candidate_coverage: float = float("nan")

    def as_row(self) -> dict:
        return {
            "epoch": self.epoch,
            "generative_term": self.generative_term,
            "candidate_term": self.candidate_term,
            "kl_term": self.kl_term,
            "total": self.total,
            "wall_ms": self.wall_ms,
        }


@dataclass
class TrainingResult:
    """
    Artifacts of a training run.

    Attributes:
        classifier: Trained classifier.
        nets: CVAE networks (untrained for the ablation).
        labels: Final label table.
        prior: Max-entropy prior used by the KL term.
        standardizer: Feature transform fitted on the training data.
        config: Configuration of the run.
        metrics: One entry per main-loop epoch.
        warmup_mse: Mean reconstruction MSE per warm-up epoch.
    """

    classifier: ClassifierNet
    nets: CvaeNets
    labels: LabelTable
    prior: PriorVector
    standardizer: Standardizer
    config: TrainConfig
    metrics: List[EpochMetrics] = field(default_factory=list)
    warmup_mse: List[float] = field(default_factory=list)

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """Class probabilities for raw (unstandardized) features."""
        return predict(self.classifier, self.standardizer.apply(features))

    def predict(self, features: np.ndarray) -> np.ndarray:
        return self.predict_proba(features).argmax(axis=1)

    def to_checkpoint(self, epoch: int) -> ModelCheckpoint:
        return ModelCheckpoint(
            d=self.classifier.d,
            k=self.classifier.k,
            config=self.config.model_dump(),
            classifier=self.classifier.state_dict(),
            encoder=self.nets.encoder.state_dict(),
            decoder=self.nets.decoder.state_dict(),
            sigma=self.nets.sigma,
            seed=self.config.seed,
            standardizer=self.standardizer.to_dict(),
            epoch=epoch,
        )


def build_networks(
    d: int, k: int, config: TrainConfig, seed_sequence: np.random.SeedSequence
) -> Tuple[ClassifierNet, CvaeNets]:
    """Fresh classifier and CVAE, each initialized from its own child seed."""
    classifier_seed, cvae_seed = seed_sequence.spawn(2)
    classifier = ClassifierNet(
        d, k, np.random.default_rng(classifier_seed), hidden=config.hidden, batch_norm=config.batch_norm
    )
    nets = CvaeNets(
        d,
        k,
        np.random.default_rng(cvae_seed),
        m=config.m,
        hidden=config.hidden,
        batch_norm=config.batch_norm,
        sigma_init=config.sigma_init,
        sigma_ema_decay=config.sigma_ema_decay,
        sigma_floor=config.sigma_floor,
    )
    return classifier, nets


def restore_result(checkpoint: ModelCheckpoint) -> TrainingResult:
    """
    Rebuild a TrainingResult from a checkpoint for prediction.

    The label table is empty and the prior is uniform.
    """
    config = TrainConfig.model_validate(checkpoint.config)
    classifier, nets = build_networks(checkpoint.d, checkpoint.k, config, np.random.SeedSequence(config.seed))
    classifier.load_state_dict(checkpoint.classifier)
    if checkpoint.encoder:
        nets.encoder.load_state_dict(checkpoint.encoder)
    if checkpoint.decoder:
        nets.decoder.load_state_dict(checkpoint.decoder)
    nets.sigma = checkpoint.sigma
    standardizer = (
        Standardizer.from_dict(checkpoint.standardizer)
        if checkpoint.standardizer
        else Standardizer.identity(checkpoint.d)
    )
    empty = np.zeros((0, checkpoint.k), dtype=bool)
    uniform = np.full(checkpoint.k, 1.0 / checkpoint.k)
    return TrainingResult(
        classifier=classifier,
        nets=nets,
        labels=LabelTable(empty, np.zeros((0, checkpoint.k))),
        prior=PriorVector(pi=uniform, alpha_pi=np.ones(checkpoint.k), delta=config.delta),
        standardizer=standardizer,
        config=config,
    )


class Trainer:
    """
    Orchestrates one training run.

    Each instance is used by exactly one thread; the experiment service
    creates one trainer per seed.
    """

    def __init__(
        self,
        config: TrainConfig,
        show_progress: bool = False,
        checkpoint_store: Optional[CheckpointStore] = None,
        metrics_writer: Optional[MetricsWriter] = None,
        on_epoch: Optional[Callable[[EpochMetrics], None]] = None,
    ) -> None:
        """
        Initialize the trainer.

        Args:
            config: Run hyperparameters.
            show_progress: Draw tqdm progress bars.
            checkpoint_store: Where to write periodic and final checkpoints.
            metrics_writer: Receives one CSV row per main-loop epoch.
            on_epoch: Optional callback invoked after every main-loop epoch.
        """
        self.config = config
        self.show_progress = show_progress
        self.checkpoint_store = checkpoint_store
        self.metrics_writer = metrics_writer
        self.on_epoch = on_epoch

    def _check_finite(self, value: Tensor, epoch: int, batch: int, phase: str) -> None:
        if not np.isfinite(value.data).all():
            logger.error(f"Non-finite loss in {phase} epoch {epoch}, batch {batch}")
            raise TrainingDivergedException(epoch, batch, phase)

    def cvae_loss(
        self,
        nets: CvaeNets,
        features: np.ndarray,
        label_rows: np.ndarray,
        sigma: float,
        rng: np.random.Generator,
    ) -> Tuple[Tensor, float, float]:
        """
        Warm-up loss: mean of -recon_loglik + KL(r(z | x, y) || N(0, I)).

        Returns:
            (loss tensor, batch RMSE, batch MSE).
        """
        posterior, _, recon = cvae_forward(nets, features, label_rows, rng)
        per_row = kl_gaussian_std(posterior) - recon_loglik(features, recon, sigma)
        residual = features - recon.data
        mse = float(np.mean(residual**2))
        return ops.mean(per_row), float(np.sqrt(mse)), mse

    def warmup(
        self,
        nets: CvaeNets,
        features: np.ndarray,
        labels: LabelTable,
        rng: np.random.Generator,
        optimizer: Optional[Adam] = None,
    ) -> List[float]:
        """
        Train the CVAE for T_w epochs on the current label table.

        The loss uses the initial noise scale; the EMA of the batch RMSE is
        tracked in nets.sigma and takes effect after warm-up.

        Returns:
            Mean reconstruction MSE per epoch.
        """
        optimizer = optimizer or Adam(nets.named_parameters(), lr=self.config.lr)
        history: List[float] = []
        nets.train()
        epochs = tqdm(
            range(1, self.config.T_w + 1),
            desc="warm-up",
            disable=not self.show_progress,
            leave=False,
        )
        for epoch in epochs:
            batch_mse = []
            for index, ids in enumerate(shuffled_batches(labels.n, self.config.n_m, rng)):
                optimizer.zero_grad()
                loss, rmse, mse = self.cvae_loss(nets, features[ids], labels.take(ids), self.config.sigma_init, rng)
                self._check_finite(loss, epoch, index, "warmup")
                loss.backward()
                optimizer.step()
                sigma_ema_update(nets, rmse)
                batch_mse.append(mse)
            history.append(float(np.mean(batch_mse)))
            logger.debug(f"Warm-up epoch {epoch}: mse {history[-1]:.5f}, sigma {nets.sigma:.4f}")
        if self.config.T_w:
            logger.info(f"Warm-up done after {self.config.T_w} epochs: mse {history[-1]:.5f}, sigma {nets.sigma:.4f}")
        return history

    def fit(self, dataset: PLLDataset, seed_sequence: Optional[np.random.SeedSequence] = None) -> TrainingResult:
        """
        Train on a dataset.

        Args:
            dataset: Training data (true labels, if present, are ignored).
            seed_sequence: Source of all randomness; defaults to config.seed.

        Returns:
            TrainingResult with networks, label table, prior and metrics.

        Raises:
            TrainingDivergedException: If a loss becomes non-finite.
        """
        config = self.config
        seed_sequence = seed_sequence or np.random.SeedSequence(config.seed)
        init_seed, run_seed = seed_sequence.spawn(2)
        rng = np.random.default_rng(run_seed)

        standardizer = Standardizer.fit(dataset.features) if config.standardize else Standardizer.identity(dataset.d)
        features = standardizer.apply(dataset.features)
        candidates = dataset.candidates

        classifier, nets = build_networks(dataset.d, dataset.k, config, init_seed)
        prior = build_prior(candidates, config.delta)
        labels = LabelTable.uniform(candidates)
        result = TrainingResult(classifier, nets, labels, prior, standardizer, config)

        logger.info(
            f"Training {config.objective} on {dataset.name}: n={dataset.n}, d={dataset.d}, k={dataset.k}, "
            f"T={config.T}, T_w={config.T_w}"
        )

        use_cvae = config.objective == "vipll"
        cvae_optimizer = Adam(nets.named_parameters(), lr=config.lr)
        if use_cvae:
            result.warmup_mse = self.warmup(nets, features, labels, rng, cvae_optimizer)
        classifier_optimizer = Adam(classifier.named_parameters(), lr=config.lr)

        epochs = tqdm(range(1, config.T + 1), desc="train", disable=not self.show_progress)
        for epoch in epochs:
            start = time.perf_counter()
            breakdowns: List[ElboBreakdown] = []
            for index, ids in enumerate(shuffled_batches(dataset.n, config.n_m, rng)):
                batch = MiniBatch(ids=ids, features=features[ids], candidates=candidates[ids])
                breakdowns.append(
                    self._train_batch(classifier, nets, labels, prior, batch, rng, epoch, index, classifier_optimizer,
                                      cvae_optimizer if use_cvae else None)
                )

            metrics = self._epoch_metrics(epoch, breakdowns, start, classifier, features, candidates)
            result.metrics.append(metrics)
            if self.metrics_writer is not None:
                self.metrics_writer.append(metrics.as_row())
            if self.on_epoch is not None:
                self.on_epoch(metrics)
            if epoch % config.log_every == 0 or epoch == config.T:
                logger.info(
                    f"Epoch {epoch}/{config.T}: total {metrics.total:.4f}, kl {metrics.kl_term:.4f}, "
                    f"coverage {metrics.candidate_coverage:.4f}"
                )
            if self.checkpoint_store is not None and config.checkpoint_every and epoch % config.checkpoint_every == 0:
                self.checkpoint_store.save(result.to_checkpoint(epoch), self.checkpoint_store.epoch_path(epoch))

        if self.checkpoint_store is not None:
            self.checkpoint_store.save(result.to_checkpoint(config.T))
        return result

    def _train_batch(
        self,
        classifier: ClassifierNet,
        nets: CvaeNets,
        labels: LabelTable,
        prior: PriorVector,
        batch: MiniBatch,
        rng: np.random.Generator,
        epoch: int,
        index: int,
        classifier_optimizer: Adam,
        cvae_optimizer: Optional[Adam],
    ) -> ElboBreakdown:
        config = self.config
        classifier_optimizer.zero_grad()
        nets.zero_grad()
        try:
            if config.objective == "vipll":
                # BN running statistics move only in the CVAE step
                nets.eval()
                try:
                    outcome = beta_elbo_batch(
                        classifier, nets, prior.alpha_pi, batch, config.b, config.b_prime, config.beta, rng,
                        candidate_estimator=config.candidate_estimator,
                    )
                finally:
                    nets.train()
            else:
                outcome = ablation_loss(
                    classifier, labels, batch, config.b, rng,
                    concentration=config.ablation_concentration,
                    candidate_estimator=config.candidate_estimator,
                )
            self._check_finite(outcome.loss, epoch, index, "main")
            outcome.loss.backward()
            classifier_optimizer.step()
        except DomainException as e:
            logger.error(f"Numeric failure in main epoch {epoch}, batch {index}: {e}")
            raise

        if cvae_optimizer is not None:
            cvae_optimizer.zero_grad()
            loss, rmse, _ = self.cvae_loss(nets, batch.features, labels.take(batch.ids), nets.sigma, rng)
            self._check_finite(loss, epoch, index, "main")
            loss.backward()
            cvae_optimizer.step()
            sigma_ema_update(nets, rmse)

        update_labels(labels, batch.ids, outcome.alpha)
        logger.debug(f"Epoch {epoch} batch {index}: total {outcome.breakdown.total:.4f}")
        return outcome.breakdown

    def _epoch_metrics(
        self,
        epoch: int,
        breakdowns: List[ElboBreakdown],
        start: float,
        classifier: ClassifierNet,
        features: np.ndarray,
        candidates: np.ndarray,
    ) -> EpochMetrics:
        coverage = float((predict(classifier, features) * candidates).sum(axis=1).mean())
        return EpochMetrics(
            epoch=epoch,
            generative_term=float(np.mean([b.generative_term for b in breakdowns])),
            candidate_term=float(np.mean([b.candidate_term for b in breakdowns])),
            kl_term=float(np.mean([b.kl_term for b in breakdowns])),
            total=float(np.mean([b.total for b in breakdowns])),
            wall_ms=(time.perf_counter() - start) * 1000.0,
            candidate_coverage=coverage,
        )


def warmup(
    nets: CvaeNets,
    dataset: PLLDataset,
    labels: LabelTable,
    config: TrainConfig,
    rng: np.random.Generator,
) -> CvaeNets:
    """Run the CVAE warm-up on the dataset features and return the networks."""
    Trainer(config).warmup(nets, dataset.features, labels, rng)
    return nets


def fit(dataset: PLLDataset, config: TrainConfig, seed_sequence: Optional[np.random.SeedSequence] = None) -> TrainingResult:
    """Train with a default Trainer (no progress bars, no files)."""
    return Trainer(config).fit(dataset, seed_sequence)
