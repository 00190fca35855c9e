"""
TrainConfig DTO for training runs.

This module defines the validated hyperparameters of one training run.
"""

from typing import Literal

from pydantic import BaseModel, Field, field_validator


class TrainConfig(BaseModel):
    """
    Hyperparameters of the variational partial-label learner.

    Attributes:
        T: Main training epochs.
        T_w: CVAE warm-up epochs.
        n_m: Mini-batch size.
        b: Dirichlet samples per instance.
        b_prime: Importance samples per Dirichlet sample.
        beta: KL weight.
        delta: Prior lift exponent.
        lr: Adam learning rate for all networks.
        m: CVAE latent dimension.
        hidden: Hidden layer width.
        seed: Master seed of the run.
    """

    T: int = Field(1000, ge=1, description="Main training epochs")
    T_w: int = Field(500, ge=0, description="CVAE warm-up epochs")
    n_m: int = Field(256, ge=1, description="Mini-batch size")
    b: int = Field(10, ge=1, description="Dirichlet samples per instance")
    b_prime: int = Field(10, ge=1, description="Importance samples per label sample")
    beta: float = Field(1.0, gt=0.0, le=1.0, description="Weight of the prior KL term")
    delta: float = Field(0.5, ge=0.0, le=1.0, description="Exponent lifting the prior to Dirichlet parameters")
    lr: float = Field(1e-3, gt=0.0, description="Adam learning rate")
    m: int = Field(32, ge=1, description="CVAE latent dimension")
    hidden: int = Field(256, ge=1, description="Hidden layer width")
    seed: int = Field(0, ge=0, le=2**64 - 1, description="Master seed")

    candidate_estimator: Literal["sampled", "closed_form"] = Field(
        "sampled",
        description="Monte Carlo or closed-form candidate term"
    )
    objective: Literal["vipll", "ablation"] = Field(
        "vipll",
        description="Full beta-ELBO or the discriminative ablation"
    )
    sigma_init: float = Field(1.0, gt=0.0, description="Decoder noise scale during warm-up")
    sigma_ema_decay: float = Field(0.99, gt=0.0, lt=1.0, description="EMA decay of the noise scale")
    sigma_floor: float = Field(1e-2, gt=0.0, description="Lower bound on each RMSE observation")
    ablation_concentration: float = Field(10.0, gt=0.0, description="Concentration of the label-table Dirichlet")
    batch_norm: bool = Field(True, description="Batch normalization after hidden layers")
    standardize: bool = Field(True, description="Z-score features with training statistics")
    checkpoint_every: int = Field(0, ge=0, description="Checkpoint interval in epochs, 0 = final only")
    log_every: int = Field(10, ge=1, description="Epoch interval of INFO summaries")

    model_config = {"extra": "forbid"}

    @field_validator("sigma_floor")
    @classmethod
    def validate_sigma_floor(cls, v: float) -> float:
        """
        Validate the noise-scale floor.

        Args:
            v: The floor value.

        Returns:
            The validated floor.

        Raises:
            ValueError: If the floor is not finite.
        """
        if v != v or v == float("inf"):
            raise ValueError("sigma_floor must be finite")
        return v
