from __future__ import annotations

from typing import List

from .._types import SplitTag
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["EvaluationReport"]


class EvaluationReport(BaseModel):
    split: SplitTag

    accuracy: float

    confusion: List[List[int]]
    """confusion[true][predicted] sample counts."""

    n: int

    class_names: List[str]

    def _check(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0:
            raise InvalidInputError(f"Accuracy must lie in [0, 1], got {self.accuracy}")
        if sum(map(sum, self.confusion)) != self.n:
            raise InvalidInputError("Confusion counts must add up to the number of evaluated samples")
