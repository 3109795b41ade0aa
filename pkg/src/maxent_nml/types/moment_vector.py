from __future__ import annotations

import math
from typing import List

import numpy as np

from .._types import FloatArray
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["MomentVector"]


class MomentVector(BaseModel):
    means: List[float]
    """Target expectation of each feature column, in feature units."""

    def _check(self) -> None:
        if not all(math.isfinite(value) for value in self.means):
            raise InvalidInputError(f"Moments must be finite, got {self.means}")

    def as_array(self) -> FloatArray:
        return np.asarray(self.means, dtype=np.float64)
