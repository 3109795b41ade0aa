from __future__ import annotations

from typing import List

from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["TypeClass"]


class TypeClass(BaseModel):
    counts: List[int]
    """Number of occurrences of each alphabet symbol; a composition of n."""

    log_multiplicity: float
    """ln(n! / prod_j counts_j!), the log of the number of sequences with these counts."""

    def _check(self) -> None:
        if any(count < 0 for count in self.counts):
            raise InvalidInputError(f"Type counts must be non-negative: {self.counts}")

    @property
    def n(self) -> int:
        return sum(self.counts)
