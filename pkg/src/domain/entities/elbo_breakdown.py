"""ElboBreakdown: the three reported terms of the beta-ELBO."""

from dataclasses import asdict, dataclass
from typing import Dict

from ..exceptions import InvalidParameterException


@dataclass(frozen=True)
class ElboBreakdown:
    """
    Batch-averaged ELBO terms.

    Attributes:
        generative_term: E[log p(x | y)] estimate.
        candidate_term: E[log p(s | y)], including the -(k - 1) log 2 constant.
        kl_term: KL(q(y | x, s) || p(y)).
        beta: KL weight in (0, 1].
    """

    generative_term: float
    candidate_term: float
    kl_term: float
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= 1.0:
            raise InvalidParameterException("beta", self.beta, "must lie in (0, 1]")

    @property
    def total(self) -> float:
        return self.generative_term + self.candidate_term - self.beta * self.kl_term

    def to_dict(self) -> Dict[str, float]:
        values = asdict(self)
        values["total"] = self.total
        return values
