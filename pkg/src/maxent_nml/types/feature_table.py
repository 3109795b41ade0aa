from __future__ import annotations

import math
from typing import List

import numpy as np

from .._types import FloatArray, FeatureKind
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["FeatureTable", "CondFeatureTable"]


def _check_matrix(values: List[List[float]], rows: int, what: str) -> int:
    if len(values) != rows:
        raise InvalidInputError(f"{what} has {len(values)} rows, expected {rows}")
    widths = {len(row) for row in values}
    if len(widths) > 1:
        raise InvalidInputError(f"{what} rows have differing lengths: {sorted(widths)}")
    if not all(math.isfinite(value) for row in values for value in row):
        raise InvalidInputError(f"{what} entries must be finite")
    return widths.pop() if widths else 0


class FeatureTable(BaseModel):
    values: List[List[float]]
    """Row `j` holds phi_1(x_j), ..., phi_m(x_j). An empty row means the unconstrained model."""

    kind: FeatureKind = "custom"

    def _check(self) -> None:
        if len(self.values) < 2:
            raise InvalidInputError(f"A feature table needs at least 2 rows, got {len(self.values)}")
        _check_matrix(self.values, len(self.values), "Feature table")

    @property
    def num_symbols(self) -> int:
        return len(self.values)

    @property
    def num_features(self) -> int:
        return len(self.values[0])

    def as_array(self) -> FloatArray:
        return np.asarray(self.values, dtype=np.float64).reshape(self.num_symbols, self.num_features)

    def prefix(self, columns: int) -> FeatureTable:
        """The table made of the first `columns` feature columns."""
        if not 0 <= columns <= self.num_features:
            raise InvalidInputError(f"Cannot take {columns} of {self.num_features} feature columns")
        return FeatureTable(values=[row[:columns] for row in self.values], kind=self.kind)


class CondFeatureTable(BaseModel):
    values: List[List[float]]
    """Row `j * num_classes + c` holds phi_1(x_j, c), ..., phi_F(x_j, c)."""

    num_symbols: int

    num_classes: int

    order: int = 0
    """Number of moment constraints `m` the table was built from; the model index reported to users."""

    intercept: bool = True

    def _check(self) -> None:
        if self.num_symbols < 1 or self.num_classes < 2:
            raise InvalidInputError(
                "A conditional feature table needs >= 1 symbol and >= 2 classes, "
                f"got {self.num_symbols}x{self.num_classes}"
            )
        width = _check_matrix(self.values, self.num_symbols * self.num_classes, "Conditional feature table")
        if width < 1:
            raise InvalidInputError("A conditional feature table needs at least one feature")

    @property
    def num_features(self) -> int:
        return len(self.values[0])

    def as_array(self) -> FloatArray:
        """Feature values shaped (symbols, classes, features)."""
        return np.asarray(self.values, dtype=np.float64).reshape(self.num_symbols, self.num_classes, self.num_features)
