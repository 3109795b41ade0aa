from __future__ import annotations

from typing import Dict, List

from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["GeneSelection"]


class GeneSelection(BaseModel):
    gene_id: str

    chosen_m: int
    """Number of moment constraints with the smallest conditional NML codelength."""

    min_nml_nats: float

    nml_nats: Dict[int, float]
    """Conditional NML codelength of the class labels for every m that could be evaluated."""

    err_nats: Dict[int, float] = {}

    comp_nats: Dict[int, float] = {}

    levels: int
    """Number of quantization levels the gene was coded with."""

    cut_points: List[float] = []

    constant: bool = False

    failures: Dict[int, str] = {}
    """Values of m whose codelength could not be computed, with the reason."""

    def _check(self) -> None:
        if not self.nml_nats:
            raise InvalidInputError(f"Gene {self.gene_id} has no evaluated m")
        if self.chosen_m not in self.nml_nats:
            raise InvalidInputError(f"chosen_m={self.chosen_m} was not evaluated for gene {self.gene_id}")
        if self.min_nml_nats != min(self.nml_nats.values()) or self.nml_nats[self.chosen_m] != self.min_nml_nats:
            raise InvalidInputError(f"min_nml_nats of gene {self.gene_id} is not the minimum of its curve")
