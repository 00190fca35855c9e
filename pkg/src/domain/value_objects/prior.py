"""
Value objects for the class prior.

PriorBounds carries the frequency constraints implied by the candidate sets;
PriorVector carries the solved prior and its Dirichlet lift.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidParameterException


@dataclass(frozen=True)
class PriorBounds:
    """
    Box constraints on the class prior.

    Attributes:
        lower: Per-class share of instances whose candidate set is exactly {j}.
        upper: Per-class share of instances whose candidate set contains j.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=np.float64)
        upper = np.asarray(self.upper, dtype=np.float64)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise InvalidParameterException(
                "bounds", (lower.shape, upper.shape), "lower and upper must be equal-length vectors"
            )
        if np.any(lower < 0) or np.any(upper > 1) or np.any(lower > upper):
            raise InvalidParameterException(
                "bounds", (lower.tolist(), upper.tolist()), "need 0 <= lower <= upper <= 1"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def k(self) -> int:
        return int(self.lower.size)

    @classmethod
    def from_candidates(cls, candidates: np.ndarray) -> "PriorBounds":
        """
        Derive the bounds from an (n, k) boolean candidate matrix.

        Args:
            candidates: Candidate indicator rows.

        Returns:
            PriorBounds with lower = singleton frequency, upper = membership frequency.
        """
        candidates = np.asarray(candidates, dtype=bool)
        n = candidates.shape[0]
        singleton = candidates.sum(axis=1) == 1
        lower = candidates[singleton].sum(axis=0) / n
        upper = candidates.sum(axis=0) / n
        return cls(lower=lower, upper=upper)


@dataclass(frozen=True)
class PriorVector:
    """
    Solved max-entropy prior and its Dirichlet parameters.

    Attributes:
        pi: Prior class distribution on the simplex.
        alpha_pi: Dirichlet parameters (pi_j / min pi)^delta, all >= 1.
        delta: Lift exponent in [0, 1].
    """

    pi: np.ndarray
    alpha_pi: np.ndarray
    delta: float
