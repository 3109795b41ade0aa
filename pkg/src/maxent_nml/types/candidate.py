from __future__ import annotations

from typing import List, Union

from .._models import BaseModel
from .._exceptions import InvalidInputError
from .feature_table import FeatureTable, CondFeatureTable

__all__ = ["Candidate", "CandidateSet"]


class Candidate(BaseModel):
    id: str
    """Identifier reported in selection tables; ties are broken by this value."""

    features: Union[FeatureTable, CondFeatureTable]

    @property
    def num_features(self) -> int:
        return self.features.num_features

    @property
    def conditional(self) -> bool:
        return isinstance(self.features, CondFeatureTable)


class CandidateSet(BaseModel):
    candidates: List[Candidate]

    def _check(self) -> None:
        if not self.candidates:
            raise InvalidInputError("A candidate set needs at least one candidate")
        ids = [candidate.id for candidate in self.candidates]
        if len(set(ids)) != len(ids):
            raise InvalidInputError(f"Candidate ids must be unique: {ids}")
        kinds = {candidate.conditional for candidate in self.candidates}
        if len(kinds) > 1:
            raise InvalidInputError("Candidates must be all generative or all conditional feature tables")
        if kinds == {False}:
            sizes = {candidate.features.num_symbols for candidate in self.candidates}
        else:
            sizes = {
                (candidate.features.num_symbols, candidate.features.num_classes)  # type: ignore[union-attr]
                for candidate in self.candidates
            }
        if len(sizes) > 1:
            raise InvalidInputError(f"Candidates must share one alphabet (and class set), got {sorted(sizes)}")

    @property
    def conditional(self) -> bool:
        return self.candidates[0].conditional

    @property
    def num_symbols(self) -> int:
        return self.candidates[0].features.num_symbols
