from __future__ import annotations

from typing import List, Sequence

import numpy as np

from .._types import IntArray
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["Sample"]


class Sample(BaseModel):
    indices: List[int]
    """Alphabet index of each observation, in observation order."""

    def _check(self) -> None:
        if not self.indices:
            raise InvalidInputError("A sample needs at least one observation")
        if min(self.indices) < 0:
            raise InvalidInputError(f"Sample indices must be non-negative, got {min(self.indices)}")

    @classmethod
    def of(cls, indices: Sequence[int] | IntArray) -> Sample:
        return cls(indices=[int(value) for value in indices])

    @property
    def n(self) -> int:
        return len(self.indices)

    def as_array(self) -> IntArray:
        return np.asarray(self.indices, dtype=np.int64)

    def check_alphabet(self, size: int) -> None:
        top = max(self.indices)
        if top >= size:
            raise InvalidInputError(f"Sample index {top} is out of range for an alphabet of {size} symbols")

    def counts(self, size: int) -> IntArray:
        """The type (histogram) of the sample over an alphabet of `size` symbols."""
        self.check_alphabet(size)
        return np.bincount(self.as_array(), minlength=size).astype(np.int64)
