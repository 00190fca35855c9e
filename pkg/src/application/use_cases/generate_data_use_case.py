"""
Generate Data Use Case.

This module implements the use case for building a partial-label dataset:
synthetic blobs (or a labelled ``.pll`` file) whose candidate sets are drawn
by the probe-classifier strategies.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from ...domain.entities import PLLDataset
from ...domain.services import DEFAULT_SEPARATION, generate_candidates, random_permutation, synth_blobs, train_probe
from ...infrastructure.metrics import write_json
from ..dto import GenSpec
from ..services.dataset_service import DatasetService

logger = logging.getLogger(__name__)


class GenerateDataUseCase:
    """
    Use case for generating a candidate-label dataset.

    The blob features and the Bernoulli draws come from ``seed``; the probe
    classifier and the class permutation come from ``spec.probe_seed``.
    """

    def __init__(self, dataset_service: DatasetService) -> None:
        """
        Initialize the use case.

        Args:
            dataset_service: Service for reading and writing datasets.
        """
        self.dataset_service = dataset_service

    def build_source(
        self,
        source: Optional[str],
        n: int,
        k: int,
        d: int,
        separation: float,
        rng: np.random.Generator,
    ) -> PLLDataset:
        """Load the labelled source dataset, or synthesize blobs when no file is given."""
        if source is not None:
            return self.dataset_service.load(source)
        return synth_blobs(n, k, d, rng, separation=separation)

    def execute(
        self,
        out_dir: str,
        spec: GenSpec,
        seed: int = 0,
        source: Optional[str] = None,
        n: int = 2000,
        k: int = 5,
        d: int = 2,
        separation: float = DEFAULT_SEPARATION,
        clean: bool = False,
    ) -> Dict[str, Any]:
        """
        Execute dataset generation.

        Args:
            out_dir: Output directory for the ``.pll`` file and summary.json.
            spec: Candidate generation settings.
            seed: Seed for the blob features and the candidate draws.
            source: Optional labelled ``.pll`` file used instead of blobs.
            n: Number of blob instances.
            k: Number of classes.
            d: Feature dimension.
            separation: Distance of the blob means from the origin.
            clean: Keep singleton candidate sets (no probe, no draws).

        Returns:
            Dictionary with the dataset path, summary and permutation used.

        Raises:
            MissingLabelsException: If the source has no true labels.
            InvalidParameterException: If the blob parameters are invalid.
        """
        logger.info(f"Executing generate use case: source={source or 'blobs'}, strategy={spec.strategy}")

        blob_seq, draw_seq = np.random.SeedSequence(seed).spawn(2)
        probe_seq, perm_seq = np.random.SeedSequence(spec.probe_seed).spawn(2)

        dataset = self.build_source(source, n, k, d, separation, np.random.default_rng(blob_seq))
        dataset.require_labels("generate")

        permutation = None
        if not clean:
            probe = train_probe(
                dataset,
                np.random.default_rng(probe_seq),
                epochs=spec.probe_epochs,
                hidden=spec.probe_hidden,
            )
            if spec.strategy == "longtail_mix":
                if spec.permutation is not None:
                    permutation = np.asarray(spec.permutation, dtype=np.int64)
                else:
                    permutation = random_permutation(dataset.k, np.random.default_rng(perm_seq))
            dataset = generate_candidates(
                dataset,
                probe.predict_proba(dataset.features),
                np.random.default_rng(draw_seq),
                strategy=spec.strategy,
                mix_weights=spec.mix_weights,
                tail_base=spec.tail_base,
                permutation=permutation,
            )

        out = Path(out_dir)
        comments = [
            f"generated by pllvi: source={source or 'blobs'} seed={seed} strategy={'none' if clean else spec.strategy}",
        ]
        if permutation is not None:
            comments.append(f"permutation={' '.join(str(int(p)) for p in permutation)}")
        dataset_path = self.dataset_service.save(dataset, out / f"{dataset.name}.pll", comments=comments)

        summary = dataset.summary().to_dict()
        result = {
            "success": True,
            "dataset_path": str(dataset_path),
            "summary": summary,
            "strategy": None if clean else spec.strategy,
            "permutation": None if permutation is None else [int(p) for p in permutation],
            "seed": seed,
            "probe_seed": spec.probe_seed,
        }
        write_json(result, out / "summary.json")

        logger.info(f"Generated {dataset!r}: mean candidate-set size {summary['mean_candidates']}")
        return result
