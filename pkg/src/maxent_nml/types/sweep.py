from __future__ import annotations

from typing import Dict, List, Optional

from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["CurvePoint", "SweepRow", "SweepResult"]


class CurvePoint(BaseModel):
    top_g: int

    accuracy: float
    """Accuracy of the classifier whose moment counts were chosen per gene by minimum NML."""

    fixed_accuracy: Dict[int, float] = {}
    """Accuracy of the baselines that use the same number of moments for every gene."""


class SweepRow(BaseModel):
    levels: int

    mean_min_nml_nats: Optional[float] = None
    """Mean minimum NML codelength of the top-ranked genes at this level count."""

    accuracy: Optional[float] = None

    num_genes: int = 0

    failure: Optional[str] = None


class SweepResult(BaseModel):
    rows: List[SweepRow]

    top_g: int

    ranking: str = "per-level"
    """Genes are re-ranked for every level count."""

    nml_argmin_levels: int

    accuracy_argmax_levels: Optional[int] = None

    def _check(self) -> None:
        if not self.rows:
            raise InvalidInputError("A quantization sweep needs at least one level count")

    @property
    def coincide(self) -> bool:
        """Whether the codelength minimum and the accuracy maximum fall on the same level count."""
        return self.nml_argmin_levels == self.accuracy_argmax_levels
