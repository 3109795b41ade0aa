from __future__ import annotations

from typing import List, Sequence

import numpy as np

from .._types import BoolArray, FloatArray, SplitTag
from .._models import BaseModel
from .._exceptions import InvalidInputError

__all__ = ["ExpressionMatrix"]


class ExpressionMatrix(BaseModel):
    gene_ids: List[str]

    sample_ids: List[str]

    values: np.ndarray  # type: ignore[type-arg]
    """Expression values shaped (genes, samples); kept read-only."""

    labels: List[int]
    """Class index of every sample column, into `class_names`."""

    class_names: List[str]
    """Sorted class labels; index 0 is the reference class."""

    split: List[SplitTag]

    def _check(self) -> None:
        shape = np.shape(self.values)
        if len(shape) != 2 or shape != (len(self.gene_ids), len(self.sample_ids)):
            raise InvalidInputError(
                f"Matrix of shape {shape} does not match {len(self.gene_ids)} genes x {len(self.sample_ids)} samples"
            )
        if len(self.labels) != len(self.sample_ids) or len(self.split) != len(self.sample_ids):
            raise InvalidInputError("Every sample column needs exactly one label and one split tag")
        if len(self.class_names) < 2:
            raise InvalidInputError(f"At least 2 classes are required, got {self.class_names}")
        if any(not 0 <= label < len(self.class_names) for label in self.labels):
            raise InvalidInputError("Sample labels must index into the class names")
        if "train" not in self.split:
            raise InvalidInputError("At least one sample column must be in the train split")
        self.values.setflags(write=False)

    @property
    def num_genes(self) -> int:
        return len(self.gene_ids)

    @property
    def num_samples(self) -> int:
        return len(self.sample_ids)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def mask(self, split: SplitTag) -> BoolArray:
        return np.asarray([tag == split for tag in self.split], dtype=bool)

    def label_array(self) -> np.ndarray:  # type: ignore[type-arg]
        return np.asarray(self.labels, dtype=np.int64)

    def with_values(self, values: FloatArray, gene_ids: Sequence[str]) -> ExpressionMatrix:
        """A matrix over the same samples with new gene rows."""
        return ExpressionMatrix(
            gene_ids=list(gene_ids),
            sample_ids=self.sample_ids,
            values=np.array(values, dtype=np.float64),
            labels=self.labels,
            class_names=self.class_names,
            split=self.split,
        )
