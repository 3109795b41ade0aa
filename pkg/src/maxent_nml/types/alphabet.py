from __future__ import annotations

import math
from typing import List

from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["Alphabet"]


class Alphabet(BaseModel):
    symbols: List[float]
    """Real value of each symbol, strictly increasing. Symbol `j` is referred to by its index."""

    def _check(self) -> None:
        if len(self.symbols) < 2:
            raise InvalidInputError(f"An alphabet needs at least 2 symbols, got {len(self.symbols)}")
        if not all(math.isfinite(value) for value in self.symbols):
            raise InvalidInputError("Alphabet symbols must be finite")
        if any(b <= a for a, b in zip(self.symbols, self.symbols[1:])):
            raise InvalidInputError(f"Alphabet symbols must be strictly increasing: {self.symbols}")

    @classmethod
    def levels(cls, size: int) -> Alphabet:
        """The integer levels 0..size-1 used for quantized data."""
        return cls(symbols=[float(value) for value in range(size)])

    @property
    def size(self) -> int:
        return len(self.symbols)
