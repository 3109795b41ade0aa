from __future__ import annotations

from typing import List

import numpy as np

from .._types import FloatArray
from .._models import BaseModel
from .._exceptions import InvalidInputError
from .maxent_distribution import MaxEntDistribution

__all__ = ["GeneModel", "MaxEntClassifier", "Prediction"]


class GeneModel(BaseModel):
    gene_id: str

    gene_index: int
    """Row of the gene in the matrix the classifier was trained on."""

    m: int

    cut_points: List[float]

    distributions: List[MaxEntDistribution]
    """Per-class maximum entropy fit of the gene's levels, in class order."""

    log_probs: List[List[float]]
    """Smoothed ln p(level | class), shaped (classes, levels)."""

    def _check(self) -> None:
        for row in self.log_probs:
            if not all(np.isfinite(row)):
                raise InvalidInputError(f"Smoothed log-probabilities of gene {self.gene_id} must be finite")

    def as_array(self) -> FloatArray:
        return np.asarray(self.log_probs, dtype=np.float64)


class MaxEntClassifier(BaseModel):
    genes: List[GeneModel]

    class_names: List[str]

    priors: List[float]
    """Empirical class frequencies of the train columns."""

    levels: int

    def _check(self) -> None:
        if not self.genes:
            raise InvalidInputError("A classifier needs at least one gene")
        if len(self.priors) != len(self.class_names):
            raise InvalidInputError("One prior per class is required")
        if abs(sum(self.priors) - 1.0) > 1e-12 or min(self.priors) <= 0.0:
            raise InvalidInputError(f"Priors must be positive and sum to 1, got {self.priors}")


class Prediction(BaseModel):
    label: int

    log_scores: List[float]
    """ln prior_c + sum_g ln p_g(x_g | c) for every class c."""
