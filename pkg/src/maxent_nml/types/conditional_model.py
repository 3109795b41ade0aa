from __future__ import annotations

from typing import List

import numpy as np

from .._types import FloatArray
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["ConditionalModel"]


class ConditionalModel(BaseModel):
    lambdas: List[float]
    """One multiplier per feature; p(c | x_j) is proportional to exp(-sum_k lambda_k phi_k(x_j, c))."""

    cond_probs: List[List[float]]
    """Row j is the label distribution p(. | x_j)."""

    cond_entropy_nats: float
    """Conditional entropy under the empirical symbol distribution of the fitted sample."""

    n: int

    residual: float = 0.0

    boundary: bool = False
    """Whether the data were (quasi-)separable, so the multipliers hit the cap and the fit lives on a face."""

    def _check(self) -> None:
        for row in self.cond_probs:
            if abs(sum(row) - 1.0) > 1e-10 or min(row) < 0.0:
                raise InvalidInputError(f"Conditional probability rows must be distributions, got {row}")

    def as_array(self) -> FloatArray:
        return np.asarray(self.cond_probs, dtype=np.float64)
