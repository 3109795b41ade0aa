from __future__ import annotations

from typing import List

from .sample import Sample
from .._types import QuantizeMethod
from .._models import BaseModel

__all__ = ["Quantization"]


class Quantization(BaseModel):
    sample: Sample
    """Level of every value, in input order."""

    levels: int

    method: QuantizeMethod

    cut_points: List[float]
    """Interior bin edges learnt from the train values, reused for every other value."""

    constant: bool = False
    """Set when the train values had no spread and every value was mapped to level 0."""
