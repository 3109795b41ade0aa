from __future__ import annotations

from typing import List

from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["ClassSet"]


class ClassSet(BaseModel):
    labels: List[str]
    """Class identifiers; index 0 is the reference class of conditional feature tables."""

    def _check(self) -> None:
        if len(self.labels) < 2:
            raise InvalidInputError(f"A class set needs at least 2 classes, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInputError(f"Class labels must be distinct: {self.labels}")

    @classmethod
    def numbered(cls, size: int) -> ClassSet:
        return cls(labels=[str(index) for index in range(size)])

    @property
    def size(self) -> int:
        return len(self.labels)
