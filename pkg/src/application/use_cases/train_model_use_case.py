"""
Train Model Use Case.

This module implements the use case for one training run with its run
directory: metrics.csv, periodic checkpoints and the final model.json.
"""

import logging
from pathlib import Path
from typing import Any, Dict

import numpy as np

from ...domain.services import accuracy
from ...infrastructure.checkpoints import CheckpointStore
from ...infrastructure.metrics import MetricsWriter, write_json
from ..dto import TrainConfig
from ..services.dataset_service import DatasetService
from ..services.trainer import Trainer

logger = logging.getLogger(__name__)


class TrainModelUseCase:
    """
    Use case for training on a dataset file.

    True labels in the file are ignored by training and only used for the
    reported train accuracy.
    """

    def __init__(self, dataset_service: DatasetService, show_progress: bool = False) -> None:
        """
        Initialize the use case.

        Args:
            dataset_service: Service for reading datasets.
            show_progress: Draw tqdm progress bars.
        """
        self.dataset_service = dataset_service
        self.show_progress = show_progress

    def execute(self, dataset_path: str, config: TrainConfig, out_dir: str) -> Dict[str, Any]:
        """
        Execute a training run.

        Args:
            dataset_path: Path to the ``.pll`` file.
            config: Run hyperparameters.
            out_dir: Run directory.

        Returns:
            Dictionary with file paths and final-epoch metrics.

        Raises:
            TrainingDivergedException: If a loss becomes non-finite.
        """
        logger.info(f"Executing train use case: dataset={dataset_path}, objective={config.objective}")

        dataset = self.dataset_service.load(dataset_path)
        out = Path(out_dir)
        store = CheckpointStore(out)
        writer = MetricsWriter(out / "metrics.csv")

        trainer = Trainer(config, show_progress=self.show_progress, checkpoint_store=store, metrics_writer=writer)
        result = trainer.fit(dataset, np.random.SeedSequence(config.seed))

        final = result.metrics[-1]
        summary: Dict[str, Any] = {
            "success": True,
            "dataset": dataset.name,
            "objective": config.objective,
            "seed": config.seed,
            "epochs": config.T,
            "model_path": str(store.final_path),
            "metrics_path": str(writer.path),
            "final_total": final.total,
            "final_kl": final.kl_term,
            "candidate_coverage": final.candidate_coverage,
            "sigma": result.nets.sigma,
            "prior_pi": result.prior.pi.tolist(),
        }
        if dataset.has_labels:
            summary["train_accuracy"] = accuracy(result.predict(dataset.features), dataset.true_labels)
            summary["label_table_accuracy"] = accuracy(result.labels.rows.argmax(axis=1), dataset.true_labels)
        write_json(summary, out / "training.json")

        logger.info(f"Training finished: total {final.total:.4f}, model at {store.final_path}")
        return summary
