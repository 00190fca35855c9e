"""
Solve Prior Use Case.

This module implements the use case for computing the max-entropy class
prior of a dataset and its Dirichlet lift.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from ...domain.services import binding_constraints, build_prior
from ...domain.value_objects import PriorBounds
from ...infrastructure.metrics import write_json
from ..services.dataset_service import DatasetService

logger = logging.getLogger(__name__)


class SolvePriorUseCase:
    """Use case for the max-entropy prior of a dataset's candidate sets."""

    def __init__(self, dataset_service: DatasetService) -> None:
        """
        Initialize the use case.

        Args:
            dataset_service: Service for reading datasets.
        """
        self.dataset_service = dataset_service

    def execute(self, dataset_path: str, delta: float, out_dir: Optional[str] = None) -> Dict[str, Any]:
        """
        Execute the prior computation.

        Args:
            dataset_path: Path to the ``.pll`` file.
            delta: Lift exponent in [0, 1].
            out_dir: If given, prior.json is written there.

        Returns:
            Dictionary with pi, alpha_pi, the bounds and the binding constraints.

        Raises:
            InfeasibleBoundsException: If the bounds admit no distribution.
            InvalidParameterException: If delta is outside [0, 1].
        """
        logger.info(f"Executing prior use case: dataset={dataset_path}, delta={delta}")

        dataset = self.dataset_service.load(dataset_path)
        bounds = PriorBounds.from_candidates(dataset.candidates)
        prior = build_prior(dataset.candidates, delta)

        result = {
            "dataset": dataset.name,
            "delta": prior.delta,
            "pi": prior.pi.tolist(),
            "alpha_pi": prior.alpha_pi.tolist(),
            "lower": bounds.lower.tolist(),
            "upper": bounds.upper.tolist(),
            "binding": binding_constraints(prior.pi, bounds),
        }
        if out_dir is not None:
            write_json(result, Path(out_dir) / "prior.json")
        return result
