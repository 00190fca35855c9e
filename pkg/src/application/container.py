"""
Dependency Injection Container.

This module provides a container for managing application dependencies
and wiring up the dependency graph.
"""

import logging
from typing import Optional

from .config import AppConfig
from .exceptions import ConfigurationException
from .services.dataset_service import DatasetService
from .use_cases.cooccurrence_use_case import CooccurrenceUseCase
from .use_cases.evaluate_use_case import EvaluateUseCase
from .use_cases.generate_data_use_case import GenerateDataUseCase
from .use_cases.solve_prior_use_case import SolvePriorUseCase
from .use_cases.train_model_use_case import TrainModelUseCase

logger = logging.getLogger(__name__)


class Container:
    """
    Dependency injection container.

    Services are lazily created singletons; use cases are created fresh on
    every call.
    """

    def __init__(self, config: Optional[AppConfig] = None) -> None:
        """
        Initialize the container.

        Args:
            config: Optional application configuration (creates new if None).
        """
        self._config = config or AppConfig()

        self._dataset_service: Optional[DatasetService] = None

        logger.debug("Container initialized")

    def config(self) -> AppConfig:
        """
        Get the application configuration.

        Returns:
            The AppConfig instance.
        """
        return self._config

    # Application Layer - Services

    def dataset_service(self) -> DatasetService:
        """
        Get the dataset service instance.

        Returns:
            Singleton DatasetService instance.
        """
        if self._dataset_service is None:
            logger.debug("Creating DatasetService instance")
            self._dataset_service = DatasetService(config=self._config)
        return self._dataset_service

    # Application Layer - Use Cases

    def generate_data_use_case(self) -> GenerateDataUseCase:
        """Create a new GenerateDataUseCase instance."""
        logger.debug("Creating GenerateDataUseCase instance")
        return GenerateDataUseCase(dataset_service=self.dataset_service())

    def solve_prior_use_case(self) -> SolvePriorUseCase:
        """Create a new SolvePriorUseCase instance."""
        logger.debug("Creating SolvePriorUseCase instance")
        return SolvePriorUseCase(dataset_service=self.dataset_service())

    def train_model_use_case(self) -> TrainModelUseCase:
        """Create a new TrainModelUseCase instance."""
        logger.debug("Creating TrainModelUseCase instance")
        return TrainModelUseCase(
            dataset_service=self.dataset_service(),
            show_progress=self._config.show_progress,
        )

    def evaluate_use_case(self) -> EvaluateUseCase:
        """Create a new EvaluateUseCase instance."""
        logger.debug("Creating EvaluateUseCase instance")
        return EvaluateUseCase(
            dataset_service=self.dataset_service(),
            show_progress=self._config.show_progress,
            max_workers=self._config.max_workers,
        )

    def cooccurrence_use_case(self) -> CooccurrenceUseCase:
        """Create a new CooccurrenceUseCase instance."""
        logger.debug("Creating CooccurrenceUseCase instance")
        return CooccurrenceUseCase(dataset_service=self.dataset_service())

    # Container Management

    def reset(self) -> None:
        """
        Reset all singleton instances.

        This is primarily useful for testing purposes.
        """
        logger.info("Resetting container")
        self._dataset_service = None

    def validate(self) -> list[str]:
        """
        Validate the container configuration.

        Returns:
            List of validation error messages (empty if valid).
        """
        logger.debug("Validating container configuration")
        return self._config.validate()

    def ensure_ready(self) -> None:
        """
        Ensure the container is ready for use.

        Raises:
            ConfigurationException: If the process configuration is invalid.
        """
        errors = self.validate()
        if errors:
            logger.error(f"Configuration validation failed: {'; '.join(errors)}")
            raise ConfigurationException("environment", "; ".join(errors))
        self._config.ensure_directories()


# Global container instance
_global_container: Optional[Container] = None


def get_container(config: Optional[AppConfig] = None) -> Container:
    """
    Get the global container instance.

    Args:
        config: Optional configuration (only used on first call).

    Returns:
        The global Container instance.
    """
    global _global_container

    if _global_container is None:
        _global_container = Container(config=config)

    return _global_container


def reset_container() -> None:
    """
    Reset the global container instance.

    This is primarily useful for testing purposes.
    """
    global _global_container
    _global_container = None
