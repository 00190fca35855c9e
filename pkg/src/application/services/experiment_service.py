"""
Experiment Service.

This module runs the evaluation protocol: repeated stratified train/test
splits, one training run per (seed, method), held-out accuracy, and the
aggregated report with Welch significance marking.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.model_selection import StratifiedShuffleSplit
from tqdm import tqdm

from ...domain.entities import PLLDataset
from ...domain.services import PlKnn, accuracy, mean_std, not_significantly_worse, welch_ttest
from ...domain.value_objects import Standardizer
from ..dto import METHODS, ExperimentConfig, ExperimentReport, RunReport, TrainConfig
from ..exceptions import UnknownMethodException
from .trainer import Trainer

logger = logging.getLogger(__name__)

_RARE_STRATUM = "__rare__"


@dataclass(frozen=True)
class SeedOutcome:
    """Result of one (seed, method) run."""

    seed_index: int
    seed: int
    method: str
    accuracy: float
    wall_seconds: float


def split_strata(dataset: PLLDataset) -> np.ndarray:
    """
    Stratification keys: the true label, or a hash of the candidate mask.

    Candidate-mask groups with a single member are pooled so every stratum
    has at least two rows.
    """
    if dataset.true_labels is not None:
        return dataset.true_labels.astype(str)
    keys = np.array(["".join("1" if c else "0" for c in row) for row in dataset.candidates])
    values, counts = np.unique(keys, return_counts=True)
    rare = set(values[counts < 2])
    keys = np.array([_RARE_STRATUM if key in rare else key for key in keys])
    if np.sum(keys == _RARE_STRATUM) == 1:
        largest = values[np.argmax(counts)]
        keys[keys == _RARE_STRATUM] = largest
    return keys


def stratified_split(dataset: PLLDataset, test_fraction: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Disjoint train/test index arrays covering the dataset.

    Falls back to an unstratified shuffle when some stratum is too small
    for the requested split.
    """
    indices = np.arange(dataset.n)
    splitter = StratifiedShuffleSplit(n_splits=1, test_size=test_fraction, random_state=seed)
    try:
        train_idx, test_idx = next(splitter.split(indices, split_strata(dataset)))
    except ValueError as e:
        logger.warning(f"Stratified split not possible ({e}); using a plain shuffle")
        order = np.random.default_rng(seed).permutation(dataset.n)
        n_test = max(1, int(round(test_fraction * dataset.n)))
        test_idx, train_idx = order[:n_test], order[n_test:]
    return np.sort(train_idx), np.sort(test_idx)


class ExperimentService:
    """
    Runs methods over repeated splits and aggregates the results.

    Seeds are spawned from the master seed before any job starts, so the
    report does not depend on the number of workers.
    """

    def __init__(
        self,
        train_config: TrainConfig,
        experiment_config: ExperimentConfig,
        show_progress: bool = False,
    ) -> None:
        """
        Initialize the experiment service.

        Args:
            train_config: Hyperparameters of the variational methods.
            experiment_config: Protocol settings.
            show_progress: Draw tqdm progress bars.
        """
        self.train_config = train_config
        self.experiment_config = experiment_config
        self.show_progress = show_progress
        self._runners: Dict[str, Callable[[PLLDataset, PLLDataset, np.random.SeedSequence], float]] = {
            "vipll": self._run_vipll,
            "vipll_ablation": self._run_ablation,
            "plknn": self._run_plknn,
        }

    def _check_methods(self, methods: Sequence[str]) -> None:
        for method in methods:
            if method not in self._runners:
                raise UnknownMethodException(method, METHODS)

    def _trainer(self, objective: str) -> Trainer:
        return Trainer(self.train_config.model_copy(update={"objective": objective}))

    def _run_vipll(self, train: PLLDataset, test: PLLDataset, seed: np.random.SeedSequence) -> float:
        result = self._trainer("vipll").fit(train, seed)
        return accuracy(result.predict(test.features), test.require_labels("evaluate"))

    def _run_ablation(self, train: PLLDataset, test: PLLDataset, seed: np.random.SeedSequence) -> float:
        result = self._trainer("ablation").fit(train, seed)
        return accuracy(result.predict(test.features), test.require_labels("evaluate"))

    def _run_plknn(self, train: PLLDataset, test: PLLDataset, seed: np.random.SeedSequence) -> float:
        standardizer = (
            Standardizer.fit(train.features) if self.train_config.standardize else Standardizer.identity(train.d)
        )
        model = PlKnn(self.experiment_config.k_neighbors).fit(train.with_features(standardizer.apply(train.features)))
        predictions = model.predict(standardizer.apply(test.features))
        return accuracy(predictions, test.require_labels("evaluate"))

    def run_experiment(
        self,
        dataset: PLLDataset,
        master_seed: Optional[int] = None,
        methods: Optional[Sequence[str]] = None,
    ) -> ExperimentReport:
        """
        Evaluate every method on n_seeds stratified splits.

        Args:
            dataset: Dataset with true labels (used only for splitting and scoring).
            master_seed: Seed the per-run seeds are spawned from; defaults to
                the training config's seed.
            methods: Methods to run; defaults to the experiment config.

        Returns:
            ExperimentReport with one RunReport per method.

        Raises:
            UnknownMethodException: If a method name is not supported.
            MissingLabelsException: If the dataset has no true labels.
        """
        methods = list(methods or self.experiment_config.methods)
        self._check_methods(methods)
        dataset.require_labels("run_experiment")
        master_seed = self.train_config.seed if master_seed is None else master_seed
        n_seeds = self.experiment_config.n_seeds

        jobs = []
        for seed_index, child in enumerate(np.random.SeedSequence(master_seed).spawn(n_seeds)):
            split_seq, *method_seqs = child.spawn(1 + len(methods))
            split_seed = int(split_seq.generate_state(1)[0])
            train_idx, test_idx = stratified_split(dataset, self.experiment_config.test_fraction, split_seed)
            train = dataset.subset(train_idx, name=f"{dataset.name}-train{seed_index}")
            test = dataset.subset(test_idx, name=f"{dataset.name}-test{seed_index}")
            for method, seq in zip(methods, method_seqs):
                jobs.append((seed_index, split_seed, method, train, test, seq))

        logger.info(f"Running {len(methods)} method(s) x {n_seeds} seed(s) on {dataset.name}")
        outcomes = self._execute(jobs)
        return self._aggregate(dataset.name, master_seed, methods, outcomes)

    def _run_job(self, job: tuple) -> SeedOutcome:
        seed_index, seed, method, train, test, seq = job
        start = time.perf_counter()
        score = self._runners[method](train, test, seq)
        elapsed = time.perf_counter() - start
        logger.info(f"Seed {seed_index} {method}: accuracy {score:.4f} ({elapsed:.1f}s)")
        return SeedOutcome(seed_index, seed, method, score, elapsed)

    def _execute(self, jobs: List[tuple]) -> List[SeedOutcome]:
        workers = min(self.experiment_config.max_workers, max(1, len(jobs)))
        outcomes: List[SeedOutcome] = []
        progress = tqdm(total=len(jobs), desc="runs", disable=not self.show_progress)
        if workers == 1:
            for job in jobs:
                outcomes.append(self._run_job(job))
                progress.update(1)
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                futures = [executor.submit(self._run_job, job) for job in jobs]
                for future in as_completed(futures):
                    outcomes.append(future.result())
                    progress.update(1)
        progress.close()
        return sorted(outcomes, key=lambda o: (o.seed_index, o.method))

    def _aggregate(
        self,
        dataset_name: str,
        master_seed: int,
        methods: Sequence[str],
        outcomes: Sequence[SeedOutcome],
    ) -> ExperimentReport:
        per_method: Dict[str, List[SeedOutcome]] = {m: [o for o in outcomes if o.method == m] for m in methods}
        scores = {m: [o.accuracy for o in runs] for m, runs in per_method.items()}
        level = self.experiment_config.significance_level
        flags = not_significantly_worse(scores, level)

        config_echo = {
            "train": self.train_config.model_dump(),
            "experiment": self.experiment_config.model_dump(),
        }
        runs = []
        for method in methods:
            accuracies = scores[method]
            mean, std = mean_std(accuracies)
            p_values = {
                other: welch_ttest(accuracies, scores[other]).p
                for other in methods
                if other != method and len(accuracies) > 1 and len(scores[other]) > 1
            }
            runs.append(
                RunReport(
                    method=method,
                    dataset=dataset_name,
                    seeds=[o.seed for o in per_method[method]],
                    accuracies=accuracies,
                    mean=mean,
                    std=std,
                    wall_seconds=[o.wall_seconds for o in per_method[method]],
                    config=config_echo,
                    p_values=p_values,
                    not_significantly_worse=flags.get(method),
                )
            )

        ablation_inferior = None
        if "vipll" in scores and "vipll_ablation" in scores:
            ablation_inferior = bool(np.mean(scores["vipll_ablation"]) < np.mean(scores["vipll"]))
        return ExperimentReport(
            dataset=dataset_name,
            master_seed=master_seed,
            significance_level=level,
            runs=runs,
            ablation_inferior=ablation_inferior,
        )


def run_experiment(
    dataset: PLLDataset,
    method: str,
    train_config: TrainConfig,
    experiment_config: ExperimentConfig,
    n_seeds: Optional[int] = None,
) -> RunReport:
    """Single-method convenience wrapper returning that method's RunReport."""
    if n_seeds is not None:
        experiment_config = experiment_config.model_copy(update={"n_seeds": n_seeds})
    report = ExperimentService(train_config, experiment_config).run_experiment(dataset, methods=[method])
    return report.runs[0]
