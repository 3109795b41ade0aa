from __future__ import annotations

import math
from typing import List

import numpy as np

from .._types import FloatArray
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["MaxEntDistribution"]


class MaxEntDistribution(BaseModel):
    probs: List[float]
    """Probability of each alphabet symbol."""

    lambdas: List[float]
    """Lagrange multipliers (lambda_0, ..., lambda_m) with p_j = exp(-lambda_0 - sum_k lambda_k phi_k(x_j))."""

    support: List[int]
    """Indices of the symbols with positive probability."""

    entropy_nats: float

    residual: float = 0.0
    """Largest absolute moment mismatch of the fit, in feature units."""

    boundary: bool = False
    """Whether the moments sit on the boundary of the moment polytope, so the fit lives on a face."""

    def _check(self) -> None:
        if any(value < 0.0 for value in self.probs):
            raise InvalidInputError("Probabilities must be non-negative")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > 1e-10:
            raise InvalidInputError(f"Probabilities must sum to 1, got {total!r}")
        if not -1e-12 <= self.entropy_nats <= math.log(len(self.probs)) + 1e-12:
            raise InvalidInputError(f"Entropy {self.entropy_nats} is outside [0, ln K]")

    def as_array(self) -> FloatArray:
        return np.asarray(self.probs, dtype=np.float64)
