"""
Evaluate Use Case.

This module implements the use cases for the multi-seed experiment
protocol and for scoring a saved model on a dataset.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ...domain.services import accuracy
from ...infrastructure.checkpoints import CheckpointStore
from ...infrastructure.metrics import write_json
from ..dto import RunConfig
from ..services.dataset_service import DatasetService
from ..services.experiment_service import ExperimentService
from ..services.trainer import restore_result

logger = logging.getLogger(__name__)


class EvaluateUseCase:
    """Use case for evaluation runs; both entry points write report.json."""

    def __init__(self, dataset_service: DatasetService, show_progress: bool = False, max_workers: int = 1) -> None:
        """
        Initialize the use case.

        Args:
            dataset_service: Service for reading datasets.
            show_progress: Draw tqdm progress bars.
            max_workers: Concurrent seed runs unless the config sets them.
        """
        self.dataset_service = dataset_service
        self.show_progress = show_progress
        self.max_workers = max_workers

    def execute_experiment(
        self,
        dataset_path: str,
        run_config: RunConfig,
        out_dir: str,
        methods: Optional[Sequence[str]] = None,
    ) -> Dict[str, Any]:
        """
        Execute the repeated-split protocol.

        Args:
            dataset_path: Path to a ``.pll`` file with true labels.
            run_config: Training and experiment settings; train.seed is the
                master seed.
            out_dir: Directory for report.json.
            methods: Methods overriding experiment.methods.

        Returns:
            The report as a dictionary.

        Raises:
            UnknownMethodException: If a method name is not supported.
            MissingLabelsException: If the dataset has no true labels.
        """
        logger.info(f"Executing evaluate use case: dataset={dataset_path}, methods={methods or 'config'}")

        dataset = self.dataset_service.load(dataset_path)
        experiment = run_config.experiment
        if "max_workers" not in experiment.model_fields_set:
            experiment = experiment.model_copy(update={"max_workers": self.max_workers})

        service = ExperimentService(run_config.train, experiment, show_progress=self.show_progress)
        report = service.run_experiment(dataset, master_seed=run_config.train.seed, methods=methods)

        payload = report.model_dump(mode="json")
        write_json(payload, Path(out_dir) / "report.json")
        return payload

    def execute_model(self, model_path: str, dataset_path: str, out_dir: str) -> Dict[str, Any]:
        """
        Score a saved model on a labelled dataset.

        Args:
            model_path: Checkpoint written by the train command.
            dataset_path: Path to a ``.pll`` file with true labels.
            out_dir: Directory for report.json.

        Returns:
            Dictionary with the accuracy and the instance count.

        Raises:
            CheckpointError: If the model file is not a checkpoint.
            MissingLabelsException: If the dataset has no true labels.
        """
        logger.info(f"Executing model evaluation: model={model_path}, dataset={dataset_path}")

        dataset = self.dataset_service.load(dataset_path)
        truth = dataset.require_labels("eval")
        result = restore_result(CheckpointStore.load(model_path))
        score = accuracy(result.predict(dataset.features), truth)

        payload = {
            "model": str(model_path),
            "dataset": dataset.name,
            "n": dataset.n,
            "accuracy": score,
        }
        write_json(payload, Path(out_dir) / "report.json")
        logger.info(f"Model accuracy on {dataset.name}: {score:.4f}")
        return payload
